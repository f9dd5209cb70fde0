#include "taucert/certificate_io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "taucert/errors.hpp"
#include "taucert/set_spec.hpp"

namespace taucert {

namespace {

std::string hexfloat(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double hexfloat_parse(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

Json rat_json(const Rational& q) { return to_string(q); }

Rational rat_parse(const Json& j, const char* what) {
  if (!j.is_string()) fail(ErrorCode::schema_mismatch, std::string("expected rational for ") + what);
  auto q = parse_rational(j.get<std::string>());
  if (!q) fail(ErrorCode::schema_mismatch, std::string("bad rational for ") + what);
  return *q;
}

Json interval_json(const ClosedInterval& iv) {
  return Json{{"lo", rat_json(iv.lo)},
              {"hi", rat_json(iv.hi)},
              {"lo_dec", to_double(iv.lo)},
              {"hi_dec", to_double(iv.hi)}};
}

ClosedInterval interval_parse(const Json& j, const char* what) {
  return {rat_parse(j.at("lo"), what), rat_parse(j.at("hi"), what)};
}

Json point_json(const RationalPoint& p) { return Json::array({rat_json(p.x), rat_json(p.y)}); }

RationalPoint point_parse(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    fail(ErrorCode::schema_mismatch, std::string("expected point for ") + what);
  return {rat_parse(j[0], what), rat_parse(j[1], what)};
}

Json window_json(const AxisWindow& w) {
  return Json{{"u", rat_json(w.u)},
              {"delta", rat_json(w.delta)},
              {"right", w.window_right},
              {"trivial", w.trivial}};
}

AxisWindow window_parse(const Json& j) {
  AxisWindow w;
  w.u = rat_parse(j.at("u"), "window.u");
  w.delta = rat_parse(j.at("delta"), "window.delta");
  w.window_right = j.at("right").get<bool>();
  w.trivial = j.at("trivial").get<bool>();
  return w;
}

}  // namespace

Json to_json(const PinCertificate& cert) {
  Json checks = Json::array();
  for (const auto& c : cert.checks)
    checks.push_back(Json{{"name", c.name}, {"lhs", rat_json(c.lhs)}, {"rhs", rat_json(c.rhs)}});
  return Json{{"phi", render(cert.phi)},
              {"engine", cert.engine},
              {"set1", cert.set1_desc},
              {"set2", cert.set2_desc},
              {"depth", cert.depth},
              {"scope", cert.scope},
              {"pin", point_json(cert.pin)},
              {"pin_radius", rat_json(cert.pin_radius)},
              {"t_window", interval_json(cert.t_window)},
              {"window1", window_json(cert.w1)},
              {"window2", window_json(cert.w2)},
              {"t0_sq", rat_json(cert.t0_sq)},
              {"t0", Json{{"lo", rat_json(cert.t0.lo)}, {"hi", rat_json(cert.t0.hi)}}},
              {"epsilon", rat_json(cert.epsilon_used)},
              {"tau2", rat_json(cert.tau2_tilde)},
              {"image_bound", rat_json(cert.image_bound)},
              {"wedge", cert.wedge},
              {"witness_point", rat_json(cert.witness_point)},
              {"checks", checks}};
}

PinCertificate pin_certificate_from_json(const Json& j) {
  try {
    PinCertificate cert;
    cert.phi = parse_phi_spec(j.at("phi").get<std::string>());
    cert.engine = j.at("engine").get<std::string>();
    cert.set1_desc = j.at("set1").get<std::string>();
    cert.set2_desc = j.at("set2").get<std::string>();
    cert.depth = j.at("depth").get<unsigned>();
    cert.scope = j.at("scope").get<std::string>();
    cert.pin = point_parse(j.at("pin"), "pin");
    cert.pin_radius = rat_parse(j.at("pin_radius"), "pin_radius");
    cert.t_window = interval_parse(j.at("t_window"), "t_window");
    cert.w1 = window_parse(j.at("window1"));
    cert.w2 = window_parse(j.at("window2"));
    cert.t0_sq = rat_parse(j.at("t0_sq"), "t0_sq");
    cert.t0 = {rat_parse(j.at("t0").at("lo"), "t0"), rat_parse(j.at("t0").at("hi"), "t0")};
    cert.epsilon_used = rat_parse(j.at("epsilon"), "epsilon");
    cert.tau2_tilde = rat_parse(j.at("tau2"), "tau2");
    cert.image_bound = rat_parse(j.at("image_bound"), "image_bound");
    cert.wedge = j.at("wedge").get<bool>();
    cert.witness_point = rat_parse(j.at("witness_point"), "witness_point");
    for (const auto& c : j.at("checks")) {
      cert.checks.push_back({c.at("name").get<std::string>(), rat_parse(c.at("lhs"), "check"),
                             rat_parse(c.at("rhs"), "check")});
    }
    return cert;
  } catch (const Json::exception& e) {
    fail(ErrorCode::schema_mismatch, std::string("pin certificate schema: ") + e.what());
  }
}

Json to_json(const DotPinCertificate& cert) {
  Json j{{"pin", point_json(cert.pin)},
         {"delta", rat_json(cert.delta)},
         {"set1", cert.set1_desc},
         {"set2", cert.set2_desc},
         {"depth", cert.depth},
         {"scope", cert.scope},
         {"t_window", interval_json(cert.t_window)},
         {"hull_a1", rat_json(cert.hull_a1)},
         {"hull_a2", rat_json(cert.hull_a2)},
         {"hull_l1", rat_json(cert.hull_l1)},
         {"hull_l2", rat_json(cert.hull_l2)},
         {"tau_product", rat_json(cert.tau_product)}};
  if (cert.paper_window) j["paper_window"] = interval_json(*cert.paper_window);
  return j;
}

DotPinCertificate dot_certificate_from_json(const Json& j) {
  try {
    DotPinCertificate cert;
    cert.pin = point_parse(j.at("pin"), "pin");
    cert.delta = rat_parse(j.at("delta"), "delta");
    cert.set1_desc = j.at("set1").get<std::string>();
    cert.set2_desc = j.at("set2").get<std::string>();
    cert.depth = j.at("depth").get<unsigned>();
    cert.scope = j.at("scope").get<std::string>();
    cert.t_window = interval_parse(j.at("t_window"), "t_window");
    cert.hull_a1 = rat_parse(j.at("hull_a1"), "hull_a1");
    cert.hull_a2 = rat_parse(j.at("hull_a2"), "hull_a2");
    cert.hull_l1 = rat_parse(j.at("hull_l1"), "hull_l1");
    cert.hull_l2 = rat_parse(j.at("hull_l2"), "hull_l2");
    cert.tau_product = rat_parse(j.at("tau_product"), "tau_product");
    if (j.contains("paper_window"))
      cert.paper_window = interval_parse(j.at("paper_window"), "paper_window");
    return cert;
  } catch (const Json::exception& e) {
    fail(ErrorCode::schema_mismatch, std::string("dot certificate schema: ") + e.what());
  }
}

Json to_json(const TreeCertificate& cert) {
  Json edges = Json::array();
  for (const auto& [a, b] : cert.tree.edges) edges.push_back(Json::array({a, b}));
  Json points = Json::array();
  for (const auto& p : cert.skeleton.points) points.push_back(point_json(p));
  Json steps = Json::array();
  for (const auto& s : cert.steps) {
    Json step{{"leaf", s.leaf},
              {"neighbor", s.neighbor},
              {"edge_index", s.input_edge_index},
              {"interval", interval_json(s.interval)},
              {"leaf_radius", rat_json(s.leaf_radius)}};
    if (s.pin) step["pin_certificate"] = to_json(*s.pin);
    if (s.dot) step["dot_certificate"] = to_json(*s.dot);
    steps.push_back(std::move(step));
  }
  Json intervals = Json::array();
  for (const auto& iv : cert.edge_intervals) intervals.push_back(interval_json(iv));
  Json radii = Json::array();
  for (const auto& r : cert.radii) radii.push_back(rat_json(r));
  return Json{{"phi", render(cert.phi)},
              {"engine", cert.engine},
              {"tree", Json{{"vertices", cert.tree.vertex_count}, {"edges", edges}}},
              {"skeleton", Json{{"points", points}, {"epsilon", rat_json(cert.skeleton.epsilon)}}},
              {"set1", cert.set1_desc},
              {"set2", cert.set2_desc},
              {"depth", cert.depth},
              {"scope", cert.scope},
              {"steps", steps},
              {"edge_intervals", intervals},
              {"radii", radii},
              {"root_radius", rat_json(cert.root_radius)}};
}

TreeCertificate tree_certificate_from_json(const Json& j) {
  try {
    TreeCertificate cert;
    cert.phi = parse_phi_spec(j.at("phi").get<std::string>());
    cert.engine = j.at("engine").get<std::string>();
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& e : j.at("tree").at("edges"))
      edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
    cert.tree = make_tree(j.at("tree").at("vertices").get<std::size_t>(), std::move(edges));
    for (const auto& p : j.at("skeleton").at("points"))
      cert.skeleton.points.push_back(point_parse(p, "skeleton point"));
    cert.skeleton.epsilon = rat_parse(j.at("skeleton").at("epsilon"), "epsilon");
    cert.set1_desc = j.at("set1").get<std::string>();
    cert.set2_desc = j.at("set2").get<std::string>();
    cert.depth = j.at("depth").get<unsigned>();
    cert.scope = j.at("scope").get<std::string>();
    for (const auto& s : j.at("steps")) {
      TreeEdgeRecord rec;
      rec.leaf = s.at("leaf").get<std::size_t>();
      rec.neighbor = s.at("neighbor").get<std::size_t>();
      rec.input_edge_index = s.at("edge_index").get<std::size_t>();
      rec.interval = interval_parse(s.at("interval"), "step interval");
      rec.leaf_radius = rat_parse(s.at("leaf_radius"), "leaf_radius");
      if (s.contains("pin_certificate"))
        rec.pin = pin_certificate_from_json(s.at("pin_certificate"));
      if (s.contains("dot_certificate"))
        rec.dot = dot_certificate_from_json(s.at("dot_certificate"));
      cert.steps.push_back(std::move(rec));
    }
    for (const auto& iv : j.at("edge_intervals"))
      cert.edge_intervals.push_back(interval_parse(iv, "edge interval"));
    for (const auto& r : j.at("radii")) cert.radii.push_back(rat_parse(r, "radius"));
    cert.root_radius = rat_parse(j.at("root_radius"), "root_radius");
    return cert;
  } catch (const Json::exception& e) {
    fail(ErrorCode::schema_mismatch, std::string("tree certificate schema: ") + e.what());
  }
}

Json to_json(const CoverageReport& report) {
  return Json{{"certificate", report.certificate},
              {"depth", report.depth},
              {"pin_grid", report.pin_grid},
              {"t_grid", report.t_grid},
              {"resolution", rat_json(report.resolution)},
              {"resolution_dec", to_double(report.resolution)},
              {"hits", report.hits},
              {"misses", report.misses},
              {"worst_residual_hex", hexfloat(report.worst_residual)},
              {"worst_residual", report.worst_residual},
              {"worst_pin", Json::array({report.worst_pin_x, report.worst_pin_y})},
              {"worst_t", report.worst_t},
              {"closure_pass", report.closure_pass},
              {"worst_closure_hex", hexfloat(report.worst_closure)},
              {"pass", report.pass()}};
}

CoverageReport coverage_report_from_json(const Json& j) {
  try {
    CoverageReport r;
    r.certificate = j.at("certificate").get<std::string>();
    r.depth = j.at("depth").get<unsigned>();
    r.pin_grid = j.at("pin_grid").get<std::size_t>();
    r.t_grid = j.at("t_grid").get<std::size_t>();
    r.resolution = rat_parse(j.at("resolution"), "resolution");
    r.hits = j.at("hits").get<std::size_t>();
    r.misses = j.at("misses").get<std::size_t>();
    r.worst_residual = hexfloat_parse(j.at("worst_residual_hex").get<std::string>());
    r.worst_pin_x = j.at("worst_pin")[0].get<double>();
    r.worst_pin_y = j.at("worst_pin")[1].get<double>();
    r.worst_t = j.at("worst_t").get<double>();
    r.closure_pass = j.at("closure_pass").get<bool>();
    r.worst_closure = hexfloat_parse(j.at("worst_closure_hex").get<std::string>());
    return r;
  } catch (const Json::exception& e) {
    fail(ErrorCode::schema_mismatch, std::string("coverage report schema: ") + e.what());
  }
}

Json to_json(const CertificateFile& file) {
  Json j{{"schema_version", file.schema_version}, {"command", file.command}};
  if (std::holds_alternative<PinCertificate>(file.payload)) {
    j["kind"] = "pin";
    j["certificate"] = to_json(std::get<PinCertificate>(file.payload));
  } else if (std::holds_alternative<DotPinCertificate>(file.payload)) {
    j["kind"] = "dot";
    j["certificate"] = to_json(std::get<DotPinCertificate>(file.payload));
  } else {
    j["kind"] = "tree";
    j["certificate"] = to_json(std::get<TreeCertificate>(file.payload));
  }
  if (file.stamp) j["verification"] = to_json(*file.stamp);
  return j;
}

CertificateFile certificate_file_from_json(const Json& j) {
  CertificateFile file;
  try {
    file.schema_version = j.at("schema_version").get<int>();
    if (file.schema_version != 1)
      fail(ErrorCode::schema_mismatch,
           "unsupported schema version " + std::to_string(file.schema_version));
    file.command = j.value("command", "");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "pin") {
      file.payload = pin_certificate_from_json(j.at("certificate"));
    } else if (kind == "dot") {
      file.payload = dot_certificate_from_json(j.at("certificate"));
    } else if (kind == "tree") {
      file.payload = tree_certificate_from_json(j.at("certificate"));
    } else {
      fail(ErrorCode::schema_mismatch, "unknown certificate kind: " + kind);
    }
    if (j.contains("verification")) file.stamp = coverage_report_from_json(j.at("verification"));
  } catch (const Json::exception& e) {
    fail(ErrorCode::schema_mismatch, std::string("certificate file schema: ") + e.what());
  }
  return file;
}

void save_certificate(const CertificateFile& file, const std::string& path) {
  std::ofstream os(path);
  if (!os) fail(ErrorCode::io_error, "cannot open for writing: " + path);
  os << to_json(file).dump(2) << "\n";
  if (!os) fail(ErrorCode::io_error, "write failed: " + path);
}

CertificateFile load_certificate(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorCode::io_error, "cannot open: " + path);
  Json j;
  try {
    is >> j;
  } catch (const Json::exception& e) {
    fail(ErrorCode::schema_mismatch, std::string("not a certificate file: ") + e.what());
  }
  return certificate_file_from_json(j);
}

void apply_test_corruption(CertificateFile& file) {
  // Push T wholly past its own width several times over; coverage must miss.
  auto shift_interval = [](ClosedInterval& iv) {
    Rational shift = (iv.width() + 1) * 64;
    iv.lo += shift;
    iv.hi += shift;
  };
  if (auto* pin = std::get_if<PinCertificate>(&file.payload)) {
    shift_interval(pin->t_window);
  } else if (auto* dot = std::get_if<DotPinCertificate>(&file.payload)) {
    shift_interval(dot->t_window);
  } else if (auto* tree = std::get_if<TreeCertificate>(&file.payload)) {
    shift_interval(tree->edge_intervals[0]);
    for (auto& step : tree->steps) {
      if (step.input_edge_index == 0) step.interval = tree->edge_intervals[0];
    }
  }
}

void reverify_certificate(const CertificateFile& file) {
  if (const auto* pin = std::get_if<PinCertificate>(&file.payload)) {
    reverify_pin_certificate(*pin);
  } else if (const auto* dot = std::get_if<DotPinCertificate>(&file.payload)) {
    reverify_dot_certificate(*dot);
  } else {
    reverify_tree_certificate(std::get<TreeCertificate>(file.payload));
  }
}

CoverageReport check_certificate(const CertificateFile& file, const CoverageParams& params) {
  if (const auto* pin = std::get_if<PinCertificate>(&file.payload))
    return check_pin_certificate(*pin, params);
  if (const auto* dot = std::get_if<DotPinCertificate>(&file.payload))
    return check_pin_certificate(*dot, params);
  return check_tree_certificate(std::get<TreeCertificate>(file.payload), params);
}

std::string coverage_csv(const CertificateFile& file, const CoverageParams& params) {
  std::ostringstream os;
  os << "pin_x,pin_y,t,residual,ok\n";
  CoverageParams with_sink = params;
  os.setf(std::ios::fmtflags(0), std::ios::floatfield);
  os.precision(17);
  with_sink.row_sink = [&os](double px, double py, double t, double residual, bool ok) {
    os << px << "," << py << "," << t << "," << residual << "," << (ok ? 1 : 0) << "\n";
  };
  check_certificate(file, with_sink);
  return os.str();
}

}  // namespace taucert
