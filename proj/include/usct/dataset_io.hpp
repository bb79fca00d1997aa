// SPDX-License-Identifier: Apache-2.0
#ifndef USCT_DATASET_IO_HPP
#define USCT_DATASET_IO_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "usct/acquisition.hpp"
#include "usct/phantom.hpp"

namespace usct {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadMagicError : IoError {
    using IoError::IoError;
};
struct VersionError : IoError {
    using IoError::IoError;
};
struct TruncatedError : IoError {
    using IoError::IoError;
};
struct ShapeError : IoError {
    using IoError::IoError;
};

inline constexpr std::uint32_t kFormatVersion = 1;

struct SourceDescriptor {
    int index = 0;
    Point position;
    Complex amplitude = kDefaultSourceValue;
};

struct DatasetEntry {
    std::string phantom_id;
    BreastType breast_type = BreastType::HET;
    SoundSpeedMap c;
    double omega = 0.0;
    SourceDescriptor source;
    ComplexField2D u;
};

void write_entry(const DatasetEntry& e, const std::filesystem::path& path);
DatasetEntry read_entry(const std::filesystem::path& path);

void write_speed_map(const SoundSpeedMap& m, const std::filesystem::path& path);
SoundSpeedMap read_speed_map(const std::filesystem::path& path);

void write_complex_field(const ComplexField2D& f, const std::filesystem::path& path);
ComplexField2D read_complex_field(const std::filesystem::path& path);

void write_tensor(const MeasurementTensor& t, const std::filesystem::path& path);
MeasurementTensor read_tensor(const std::filesystem::path& path);

struct ManifestEntry {
    std::string phantom_id;
    int freq_index = 0;
    int source_index = 0;
    std::string file;
    std::string status;  // "ok" or "failed"
};

struct Manifest {
    std::uint32_t format_version = kFormatVersion;
    Grid2D grid;
    double c0 = 1500.0;
    double roi_radius = 0.110;
    RingArray ring;
    Complex source_value = kDefaultSourceValue;
    std::vector<double> frequencies;  // angular, rad/s
    std::uint64_t seed = 0;
    bool self_measurement = true;
    std::vector<ManifestEntry> entries;
};

void write_manifest(const Manifest& m, const std::filesystem::path& path);
Manifest read_manifest(const std::filesystem::path& path);

struct ExportPhantom {
    std::string id;
    BreastType breast_type = BreastType::HET;
    SoundSpeedMap map;
};

struct ExportOptions {
    SourceInjection injection = SourceInjection::Bilinear;
    Complex source_value = kDefaultSourceValue;
    int threads = 1;
    std::uint64_t seed = 0;
};

struct ExportResult {
    Manifest manifest;
    int solves_performed = 0;
    int entries_reused = 0;
};

/// Simulates and writes one entry file per (phantom, frequency, source) plus a
/// measurement tensor per phantom and a manifest. Entries already on disk and
/// readable are reused without re-solving.
ExportResult export_dataset(const std::vector<ExportPhantom>& phantoms,
                            const std::vector<double>& angular_frequencies,
                            const RingArray& array, const CBSConfig& cfg,
                            const std::filesystem::path& dir,
                            const ExportOptions& opt = {});

}  // namespace usct

#endif
