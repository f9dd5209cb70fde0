#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <variant>

#include "taucert/oracle.hpp"

namespace taucert {

using Json = nlohmann::json;

/// The on-disk certificate: schema version, the command that produced it, the
/// payload, and an optional verification stamp.  Every rational is carried as
/// an exact "p/q" string (decimal values appear only as display hints), so
/// boundary cases like tau = 1 survive serialization bit-exactly.
struct CertificateFile {
  int schema_version = 1;
  std::string command;
  std::variant<PinCertificate, DotPinCertificate, TreeCertificate> payload;
  std::optional<CoverageReport> stamp;
};

Json to_json(const PinCertificate& cert);
Json to_json(const DotPinCertificate& cert);
Json to_json(const TreeCertificate& cert);
Json to_json(const CoverageReport& report);
Json to_json(const CertificateFile& file);

PinCertificate pin_certificate_from_json(const Json& j);
DotPinCertificate dot_certificate_from_json(const Json& j);
TreeCertificate tree_certificate_from_json(const Json& j);
CoverageReport coverage_report_from_json(const Json& j);
CertificateFile certificate_file_from_json(const Json& j);

/// File I/O; errors with ErrorCode::io_error / ErrorCode::schema_mismatch.
void save_certificate(const CertificateFile& file, const std::string& path);
CertificateFile load_certificate(const std::string& path);

/// Deterministic test corruption: shifts the certified interval far enough
/// that honest coverage must fail (the `verify --corrupt-for-test` control).
void apply_test_corruption(CertificateFile& file);

/// Runs the witness-consistency half of verification for any payload kind.
void reverify_certificate(const CertificateFile& file);

/// Runs the oracle half.
CoverageReport check_certificate(const CertificateFile& file, const CoverageParams& params);

/// One row per coverage grid cell, for `verify --csv`.
std::string coverage_csv(const CertificateFile& file, const CoverageParams& params);

}  // namespace taucert
