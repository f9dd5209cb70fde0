#pragma once

#include <string>

#include "taucert/certificate_io.hpp"

namespace taucert {

/// Deterministic SVG rendering of a certificate: the window box, the pin box
/// S, the pin curves at the two T endpoints, axis bands for the restricted
/// stage sets, and the wedge rays for middle-thirds certificates.  Repeated
/// renders are byte-identical.
std::string render_svg(const PinCertificate& cert);
std::string render_svg(const DotPinCertificate& cert);
std::string render_svg(const TreeCertificate& cert);
std::string render_svg(const CertificateFile& file);

}  // namespace taucert
