/// @file gcflow_main.cpp
/// @brief gcflow — batch front door: parse a JSON config, dispatch
///        run / check-speed / theta-scan / convergence-test, emit artifacts.
///
/// Artifacts per command:
///   run              → series.csv, final_state.obj, report.json
///   check-speed      → condition_report.json
///   theta-scan       → scan.csv
///   convergence-test → convergence.csv
///
/// Exit codes: 0 success, 1 physics failure (convexity lost), 2 config error.
///
/// The same config and overrides always produce bitwise-identical artifacts:
/// the scheme is deterministic and every float is printed with 17 significant
/// digits by a locale-independent formatter.  Misspelled or unknown config
/// keys are rejected with the line and column where they appear — a config
/// key that does nothing is worse than an error.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "gcf/errors.hpp"
#include "gcf/flow.hpp"
#include "gcf/grid.hpp"
#include "gcf/jsonio.hpp"
#include "gcf/monitors.hpp"
#include "gcf/speed.hpp"
#include "gcf/support_geometry.hpp"

namespace {

namespace fs = std::filesystem;
using gcf::json::Type;
using gcf::json::Value;

// ---------------------------------------------------------------------------
// Schema plumbing: typed extraction with line-anchored diagnostics.
// ---------------------------------------------------------------------------

[[noreturn]] void fail_at(const Value& v, const std::string& msg) {
    if (v.line > 0) {
        throw gcf::ConfigError("line " + std::to_string(v.line) + ", column " +
                                   std::to_string(v.column) + ": " + msg,
                               v.line, v.column);
    }
    // values injected by --set carry no file position
    throw gcf::ConfigError(msg + " (introduced by --set)");
}

double as_number(const Value& v, const std::string& path) {
    if (v.type != Type::number) fail_at(v, "'" + path + "' must be a number");
    return v.as_number;
}

double as_positive(const Value& v, const std::string& path) {
    const double x = as_number(v, path);
    if (!(x > 0.0)) fail_at(v, "'" + path + "' must be positive");
    return x;
}

long long as_integer(const Value& v, const std::string& path) {
    if (v.type != Type::number || !v.number_is_integer)
        fail_at(v, "'" + path + "' must be an integer");
    return static_cast<long long>(v.as_number);
}

std::string as_string(const Value& v, const std::string& path) {
    if (v.type != Type::string) fail_at(v, "'" + path + "' must be a string");
    return v.as_string;
}

bool as_bool(const Value& v, const std::string& path) {
    if (v.type != Type::boolean) fail_at(v, "'" + path + "' must be true or false");
    return v.as_bool;
}

/// Look up a top-level section; null when absent (defaults apply).
const Value* find_section(const Value& root, const char* name) {
    const Value* s = root.find(name);
    if (s && s->type != Type::object)
        fail_at(*s, std::string("section '") + name + "' must be an object");
    return s;
}

/// Reject keys outside the allowed set, anchored at the offending key.
void reject_unknown(const Value& obj, const std::string& section,
                    std::initializer_list<const char*> allowed) {
    for (const auto& [key, v] : obj.members) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) { known = true; break; }
        if (!known) fail_at(v, "unknown key '" + section + "." + key + "'");
    }
}

gcf::GridMode parse_mode(const Value& v, const std::string& path) {
    const std::string m = as_string(v, path);
    if (m == "axisymmetric") return gcf::GridMode::axisymmetric;
    if (m == "full") return gcf::GridMode::full;
    fail_at(v, "'" + path + "' must be axisymmetric | full");
}

// ---------------------------------------------------------------------------
// Resolved configuration: defaults filled, every value validated.
// ---------------------------------------------------------------------------

struct ResolvedConfig {
    gcf::RunConfig run;
    bool write_obj = true;

    // check-speed
    double check_K_lo = 0.1, check_K_hi = 100.0;
    long long check_samples = 400;
    long long check_n = 2;
    double check_gamma = 0.0;      ///< 0 → canonical exponent / search
    double check_lambda_lo = 0.0;  ///< 0 → derived from the K range
    double check_lambda_hi = 0.0;

    // theta-scan
    std::vector<double> scan_thetas{0.5, 1.0, 2.0};

    // convergence-test
    double conv_a = 1.0, conv_c = 2.0;
    gcf::GridMode conv_mode = gcf::GridMode::axisymmetric;
    std::vector<long long> conv_levels{64, 128, 256, 512};

    Value doc;                ///< canonical resolved document for the command
    std::string config_hash;  ///< FNV-1a of the canonical document
};

ResolvedConfig resolve(const Value& root) {
    if (root.type != Type::object)
        throw gcf::ConfigError("config root must be a JSON object");

    static constexpr const char* kSections[] = {
        "shape", "grid", "speed", "flow", "monitors",
        "output", "check", "scan", "convergence"};
    for (const auto& [key, v] : root.members) {
        bool known = false;
        for (const char* s : kSections)
            if (key == s) { known = true; break; }
        if (!known) fail_at(v, "unknown section '" + key + "'");
    }

    ResolvedConfig rc;
    rc.run.speed = gcf::make_power(1.0);

    if (const Value* s = find_section(root, "shape")) {
        std::string kind = "sphere";
        if (const Value* k = s->find("kind")) kind = as_string(*k, "shape.kind");
        if (kind == "sphere") {
            reject_unknown(*s, "shape", {"kind", "radius"});
            rc.run.shape.kind = gcf::ShapeKind::sphere;
            if (const Value* v = s->find("radius"))
                rc.run.shape.radius = as_positive(*v, "shape.radius");
        } else if (kind == "ellipsoid") {
            reject_unknown(*s, "shape", {"kind", "a", "c"});
            rc.run.shape.kind = gcf::ShapeKind::ellipsoid;
            if (const Value* v = s->find("a")) rc.run.shape.a = as_positive(*v, "shape.a");
            if (const Value* v = s->find("c")) rc.run.shape.c = as_positive(*v, "shape.c");
        } else if (kind == "custom") {
            reject_unknown(*s, "shape", {"kind", "samples"});
            rc.run.shape.kind = gcf::ShapeKind::custom;
            const Value* v = s->find("samples");
            if (!v) fail_at(*s, "'shape.samples' is required for kind 'custom'");
            if (v->type != Type::array)
                fail_at(*v, "'shape.samples' must be an array of numbers");
            for (const Value& e : v->items)
                rc.run.shape.samples.push_back(as_number(e, "shape.samples[]"));
        } else {
            fail_at(*s->find("kind"), "'shape.kind' must be sphere | ellipsoid | custom");
        }
    }

    if (const Value* s = find_section(root, "grid")) {
        reject_unknown(*s, "grid", {"mode", "N"});
        if (const Value* v = s->find("mode")) rc.run.mode = parse_mode(*v, "grid.mode");
        if (const Value* v = s->find("N")) {
            const long long n = as_integer(*v, "grid.N");
            if (n < 8 || n > 1 << 20) fail_at(*v, "'grid.N' must be an integer in [8, 2^20]");
            rc.run.N = static_cast<int>(n);
        }
    }

    if (const Value* s = find_section(root, "speed")) {
        std::string kind = "power";
        if (const Value* k = s->find("kind")) kind = as_string(*k, "speed.kind");
        if (kind == "power") {
            reject_unknown(*s, "speed", {"kind", "alpha"});
            double alpha = 1.0;
            if (const Value* v = s->find("alpha")) alpha = as_number(*v, "speed.alpha");
            rc.run.speed = gcf::make_power(alpha);
        } else if (kind == "log_power") {
            reject_unknown(*s, "speed", {"kind", "K0"});
            double K0 = std::exp(2.0);
            if (const Value* v = s->find("K0")) K0 = as_positive(*v, "speed.K0");
            rc.run.speed = gcf::make_log_power(2, K0);
        } else {
            fail_at(*s->find("kind"), "'speed.kind' must be power | log_power");
        }
    }

    if (const Value* s = find_section(root, "flow")) {
        reject_unknown(*s, "flow", {"theta", "t_max", "c_cfl", "r_min"});
        if (const Value* v = s->find("theta")) rc.run.theta = as_positive(*v, "flow.theta");
        if (const Value* v = s->find("t_max")) rc.run.t_max = as_positive(*v, "flow.t_max");
        if (const Value* v = s->find("c_cfl")) {
            rc.run.c_cfl = as_number(*v, "flow.c_cfl");
            if (!(rc.run.c_cfl > 0.0 && rc.run.c_cfl <= 1.0))
                fail_at(*v, "'flow.c_cfl' must lie in (0, 1]");
        }
        if (const Value* v = s->find("r_min")) rc.run.r_min = as_positive(*v, "flow.r_min");
    }

    if (const Value* s = find_section(root, "monitors")) {
        reject_unknown(*s, "monitors", {"stride", "sigmas"});
        if (const Value* v = s->find("stride")) {
            const long long st = as_integer(*v, "monitors.stride");
            if (st < 1) fail_at(*v, "'monitors.stride' must be an integer >= 1");
            rc.run.stride = static_cast<int>(st);
        }
        if (const Value* v = s->find("sigmas")) {
            if (v->type != Type::array)
                fail_at(*v, "'monitors.sigmas' must be an array of numbers");
            rc.run.sigmas.clear();
            for (const Value& e : v->items) {
                const double sg = as_number(e, "monitors.sigmas[]");
                if (sg < 0.0) fail_at(e, "'monitors.sigmas' entries must be >= 0");
                rc.run.sigmas.push_back(sg);
            }
        }
    }

    if (const Value* s = find_section(root, "output")) {
        reject_unknown(*s, "output", {"obj"});
        if (const Value* v = s->find("obj")) rc.write_obj = as_bool(*v, "output.obj");
    }

    if (const Value* s = find_section(root, "check")) {
        reject_unknown(*s, "check",
                       {"K_lo", "K_hi", "samples", "n", "gamma", "lambda_lo", "lambda_hi"});
        if (const Value* v = s->find("K_lo")) rc.check_K_lo = as_positive(*v, "check.K_lo");
        if (const Value* v = s->find("K_hi")) rc.check_K_hi = as_positive(*v, "check.K_hi");
        if (!(rc.check_K_hi > rc.check_K_lo))
            fail_at(*s, "'check.K_hi' must exceed 'check.K_lo'");
        if (const Value* v = s->find("samples")) {
            rc.check_samples = as_integer(*v, "check.samples");
            if (rc.check_samples < 100)
                fail_at(*v, "'check.samples' must be an integer >= 100");
        }
        if (const Value* v = s->find("n")) {
            rc.check_n = as_integer(*v, "check.n");
            if (rc.check_n < 2) fail_at(*v, "'check.n' must be an integer >= 2");
        }
        if (const Value* v = s->find("gamma")) {
            rc.check_gamma = as_number(*v, "check.gamma");
            if (rc.check_gamma < 0.0 || rc.check_gamma > 1.0)
                fail_at(*v, "'check.gamma' must lie in [0, 1] (0 selects the canonical exponent)");
        }
        const Value* llo = s->find("lambda_lo");
        const Value* lhi = s->find("lambda_hi");
        if ((llo != nullptr) != (lhi != nullptr))
            fail_at(*s, "'check.lambda_lo' and 'check.lambda_hi' must be given together");
        if (llo) {
            rc.check_lambda_lo = as_positive(*llo, "check.lambda_lo");
            rc.check_lambda_hi = as_positive(*lhi, "check.lambda_hi");
            if (!(rc.check_lambda_hi > rc.check_lambda_lo))
                fail_at(*lhi, "'check.lambda_hi' must exceed 'check.lambda_lo'");
        }
    }
    if (rc.check_lambda_lo == 0.0) {
        // radii box matching the K range: K = λ^{-n} on the diagonal
        rc.check_lambda_lo = std::pow(rc.check_K_hi, -1.0 / static_cast<double>(rc.check_n));
        rc.check_lambda_hi = std::pow(rc.check_K_lo, -1.0 / static_cast<double>(rc.check_n));
    }

    if (const Value* s = find_section(root, "scan")) {
        reject_unknown(*s, "scan", {"theta_values"});
        if (const Value* v = s->find("theta_values")) {
            if (v->type != Type::array || v->items.empty())
                fail_at(*v, "'scan.theta_values' must be a nonempty array of numbers");
            rc.scan_thetas.clear();
            for (const Value& e : v->items) {
                const double th = as_number(e, "scan.theta_values[]");
                if (!(th > 0.0)) fail_at(e, "'scan.theta_values' entries must be positive");
                if (!rc.scan_thetas.empty() && !(th > rc.scan_thetas.back()))
                    fail_at(e, "'scan.theta_values' must be strictly ascending");
                rc.scan_thetas.push_back(th);
            }
        }
    }

    if (const Value* s = find_section(root, "convergence")) {
        reject_unknown(*s, "convergence", {"a", "c", "mode", "levels"});
        if (const Value* v = s->find("a")) rc.conv_a = as_positive(*v, "convergence.a");
        if (const Value* v = s->find("c")) rc.conv_c = as_positive(*v, "convergence.c");
        if (const Value* v = s->find("mode")) rc.conv_mode = parse_mode(*v, "convergence.mode");
        if (const Value* v = s->find("levels")) {
            if (v->type != Type::array || v->items.empty())
                fail_at(*v, "'convergence.levels' must be a nonempty array of integers");
            rc.conv_levels.clear();
            for (const Value& e : v->items) {
                const long long n = as_integer(e, "convergence.levels[]");
                if (n < 8) fail_at(e, "'convergence.levels' entries must be >= 8");
                if (!rc.conv_levels.empty() && n <= rc.conv_levels.back())
                    fail_at(e, "'convergence.levels' must be strictly ascending");
                rc.conv_levels.push_back(n);
            }
        }
    }

    return rc;
}

// ---------------------------------------------------------------------------
// --set overrides: dotted paths into the parsed document, applied before
// validation so misspelled overrides are rejected like misspelled keys.
// ---------------------------------------------------------------------------

/// Positions inside an override refer to the argument string, not the config
/// file; drop them so later diagnostics say "(introduced by --set)" instead
/// of pointing at a meaningless line.
void clear_positions(Value& v) {
    v.line = 0;
    v.column = 0;
    for (Value& item : v.items) clear_positions(item);
    for (auto& [k, m] : v.members) clear_positions(m);
}

Value parse_override_value(const std::string& text) {
    try {
        Value v = gcf::json::parse(text);
        clear_positions(v);
        return v;
    } catch (const gcf::ConfigError&) {
        return Value::make_string(text);  // bare words are strings
    }
}

void apply_override(Value& root, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw gcf::ConfigError("override '" + assignment + "' is not of the form key=value");
    const std::string path = assignment.substr(0, eq);

    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (true) {
        const auto dot = path.find('.', begin);
        const std::string part = path.substr(begin, dot - begin);
        if (part.empty())
            throw gcf::ConfigError("override key '" + path + "' has an empty component");
        parts.push_back(part);
        if (dot == std::string::npos) break;
        begin = dot + 1;
    }

    Value* node = &root;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        Value* child = nullptr;
        for (auto& [k, v] : node->members)
            if (k == parts[i]) { child = &v; break; }
        if (!child) {
            node->members.emplace_back(parts[i], Value::make_object());
            child = &node->members.back().second;
        }
        if (child->type != Type::object)
            throw gcf::ConfigError("override '" + path + "' descends into a non-object value");
        node = child;
    }
    node->set(parts.back(), parse_override_value(assignment.substr(eq + 1)));
}

// ---------------------------------------------------------------------------
// Canonical resolved document: every artifact embeds (and is keyed by)
// the fully-defaulted configuration that produced it.
// ---------------------------------------------------------------------------

Value num(double x) { return Value::make_number(x, false); }
Value integer(long long x) { return Value::make_number(static_cast<double>(x), true); }

Value shape_doc(const gcf::ShapeSpec& shape) {
    Value s = Value::make_object();
    switch (shape.kind) {
        case gcf::ShapeKind::sphere:
            s.set("kind", Value::make_string("sphere"));
            s.set("radius", num(shape.radius));
            break;
        case gcf::ShapeKind::ellipsoid:
            s.set("kind", Value::make_string("ellipsoid"));
            s.set("a", num(shape.a));
            s.set("c", num(shape.c));
            break;
        case gcf::ShapeKind::custom: {
            s.set("kind", Value::make_string("custom"));
            Value arr = Value::make_array();
            for (double x : shape.samples) arr.items.push_back(num(x));
            s.set("samples", std::move(arr));
            break;
        }
    }
    return s;
}

Value grid_doc(const gcf::RunConfig& run) {
    Value s = Value::make_object();
    s.set("mode", Value::make_string(run.mode == gcf::GridMode::full ? "full" : "axisymmetric"));
    s.set("N", integer(run.N));
    return s;
}

Value speed_doc(const gcf::SpeedSpec& speed) {
    Value s = Value::make_object();
    if (speed.kind == gcf::SpeedKind::log_power) {
        s.set("kind", Value::make_string("log_power"));
        s.set("K0", num(speed.K0));
    } else {
        s.set("kind", Value::make_string("power"));
        s.set("alpha", num(speed.alpha));
    }
    return s;
}

Value flow_doc(const gcf::RunConfig& run) {
    Value s = Value::make_object();
    s.set("theta", num(run.theta));
    s.set("t_max", num(run.t_max));
    s.set("c_cfl", num(run.c_cfl));
    s.set("r_min", num(run.r_min));
    return s;
}

Value monitors_doc(const gcf::RunConfig& run) {
    Value s = Value::make_object();
    s.set("stride", integer(run.stride));
    Value arr = Value::make_array();
    for (double sg : run.sigmas) arr.items.push_back(num(sg));
    s.set("sigmas", std::move(arr));
    return s;
}

Value resolved_doc(const ResolvedConfig& rc, const std::string& command) {
    Value doc = Value::make_object();
    if (command == "run" || command == "theta-scan") {
        doc.set("shape", shape_doc(rc.run.shape));
        doc.set("grid", grid_doc(rc.run));
        doc.set("speed", speed_doc(rc.run.speed));
        doc.set("flow", flow_doc(rc.run));
        doc.set("monitors", monitors_doc(rc.run));
        if (command == "run") {
            Value out = Value::make_object();
            out.set("obj", Value::make_bool(rc.write_obj));
            doc.set("output", std::move(out));
        } else {
            Value scan = Value::make_object();
            Value arr = Value::make_array();
            for (double th : rc.scan_thetas) arr.items.push_back(num(th));
            scan.set("theta_values", std::move(arr));
            doc.set("scan", std::move(scan));
        }
    } else if (command == "check-speed") {
        doc.set("speed", speed_doc(rc.run.speed));
        Value chk = Value::make_object();
        chk.set("K_lo", num(rc.check_K_lo));
        chk.set("K_hi", num(rc.check_K_hi));
        chk.set("samples", integer(rc.check_samples));
        chk.set("n", integer(rc.check_n));
        chk.set("gamma", num(rc.check_gamma));
        chk.set("lambda_lo", num(rc.check_lambda_lo));
        chk.set("lambda_hi", num(rc.check_lambda_hi));
        doc.set("check", std::move(chk));
    } else {
        Value conv = Value::make_object();
        conv.set("a", num(rc.conv_a));
        conv.set("c", num(rc.conv_c));
        conv.set("mode", Value::make_string(
                             rc.conv_mode == gcf::GridMode::full ? "full" : "axisymmetric"));
        Value arr = Value::make_array();
        for (long long n : rc.conv_levels) arr.items.push_back(integer(n));
        conv.set("levels", std::move(arr));
        doc.set("convergence", std::move(conv));
    }
    return doc;
}

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------
// Artifact writers.
// ---------------------------------------------------------------------------

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw gcf::Error("cannot open '" + p.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw gcf::Error("failed while writing '" + p.string() + "'");
}

std::string series_csv(const gcf::MonitorSeries& series) {
    const auto cols = gcf::series_columns(series.sigmas);
    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out += ',';
        out += cols[i];
    }
    out += '\n';
    for (std::size_t r = 0; r < series.rows.size(); ++r) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) out += ',';
            out += gcf::json::format_number(gcf::series_value(series, r, cols[i]));
        }
        out += '\n';
    }
    return out;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

/// Quad-lattice OBJ of the embedded surface with triangle fans closing the
/// poles.  Axisymmetric states revolve the meridian into 2N rings so the
/// artifact is a watertight surface either way.
std::string obj_mesh(const gcf::FlowState& state) {
    const gcf::Grid& grid = *state.u.grid;
    const auto points = gcf::embed_surface(state.u);
    const int rows = grid.n_theta;
    const int cols = grid.mode == gcf::GridMode::full ? grid.n_phi : 2 * grid.N;

    std::string out = "# gcflow surface mesh (support-function embedding)\n";
    auto vertex = [&out](double x, double y, double z) {
        out += "v ";
        out += gcf::json::format_number(x);
        out += ' ';
        out += gcf::json::format_number(y);
        out += ' ';
        out += gcf::json::format_number(z);
        out += '\n';
    };

    if (grid.mode == gcf::GridMode::full) {
        for (const auto& p : points) vertex(p[0], p[1], p[2]);
    } else {
        // meridian points lie in the φ = 0 plane: (ρ, 0, z)
        for (int j = 0; j < rows; ++j) {
            const double rho = points[static_cast<std::size_t>(j)][0];
            const double z = points[static_cast<std::size_t>(j)][2];
            for (int k = 0; k < cols; ++k) {
                const double phi = (k + 0.5) * (2.0 * M_PI / cols);
                vertex(rho * std::cos(phi), rho * std::sin(phi), z);
            }
        }
    }

    // Pole points from the support values: cell centers sit at Δ/2 and
    // 3Δ/2, so u(0) ≈ 1.5·u₀ − 0.5·u₁ (linear extrapolation, rows averaged
    // over longitude).  The pole of a convex body with normal ±e₃ is at
    // z = ±u(pole).
    auto row_mean = [&](int j) {
        double acc = 0.0;
        for (int k = 0; k < grid.n_phi; ++k) acc += state.u.values[grid.index(j, k)];
        return acc / grid.n_phi;
    };
    const double u_north = 1.5 * row_mean(0) - 0.5 * row_mean(1);
    const double u_south = 1.5 * row_mean(rows - 1) - 0.5 * row_mean(rows - 2);
    vertex(0.0, 0.0, u_north);
    vertex(0.0, 0.0, -u_south);

    auto vid = [cols](int j, int k) { return j * cols + (k % cols) + 1; };  // OBJ is 1-based
    const int north = rows * cols + 1;
    const int south = rows * cols + 2;

    auto face4 = [&out](int a, int b, int c, int d) {
        out += "f " + std::to_string(a) + ' ' + std::to_string(b) + ' ' +
               std::to_string(c) + ' ' + std::to_string(d) + '\n';
    };
    auto face3 = [&out](int a, int b, int c) {
        out += "f " + std::to_string(a) + ' ' + std::to_string(b) + ' ' +
               std::to_string(c) + '\n';
    };

    // winding chosen so face normals point outward
    for (int j = 0; j + 1 < rows; ++j)
        for (int k = 0; k < cols; ++k)
            face4(vid(j, k), vid(j + 1, k), vid(j + 1, k + 1), vid(j, k + 1));
    for (int k = 0; k < cols; ++k) face3(north, vid(0, k), vid(0, k + 1));
    for (int k = 0; k < cols; ++k) face3(south, vid(rows - 1, k + 1), vid(rows - 1, k));
    return out;
}

Value verdict_doc(const gcf::MonotoneVerdict& v) {
    Value d = Value::make_object();
    d.set("key", Value::make_string(v.key));
    d.set("mode", Value::make_string(v.mode));
    d.set("verdict", Value::make_string(v.pass ? "pass" : "fail"));
    d.set("worst_t", num(v.worst_t));
    d.set("worst_delta", num(v.worst_delta));
    d.set("total_adverse", num(v.total_adverse));
    d.set("per_step_tol", num(v.per_step_tol));
    d.set("total_tol", num(v.total_tol));
    return d;
}

// ---------------------------------------------------------------------------
// Commands.
// ---------------------------------------------------------------------------

int cmd_run(const ResolvedConfig& rc, const fs::path& out_dir) {
    auto [series, state] = gcf::run(rc.run);
    series.config_hash = rc.config_hash;

    write_file(out_dir / "series.csv", series_csv(series));
    if (rc.write_obj) write_file(out_dir / "final_state.obj", obj_mesh(state));

    Value summary = Value::make_object();
    summary.set("status", Value::make_string(gcf::to_string(state.status)));
    summary.set("steps", integer(state.step_count));
    summary.set("t_final", num(state.t));
    summary.set("last_dt", num(state.last_dt));
    if (state.status == gcf::FlowStatus::extinct)
        summary.set("extinction_time", num(state.t));
    const gcf::MonitorRow& last = series.rows.back();
    summary.set("r_in", num(last.r_in));
    summary.set("R_out", num(last.R_out));
    summary.set("roundness", num(last.roundness));
    summary.set("min_pinch", num(last.min_pinch));
    summary.set("min_K", num(last.min_K));
    summary.set("min_lambda", num(last.min_lambda));

    // The monotone facts the flow is supposed to obey, checked on the
    // recorded series itself (tolerances repeated in the verdicts).
    Value verdicts = Value::make_array();
    if (series.rows.size() >= 2) {
        verdicts.items.push_back(verdict_doc(gcf::verify_monotone(
            series, "min_pinch", gcf::Direction::non_decreasing, 1e-8, 1e-6)));
        verdicts.items.push_back(verdict_doc(gcf::verify_monotone(
            series, "min_K", gcf::Direction::non_decreasing, 1e-8, 1e-6)));
        verdicts.items.push_back(verdict_doc(gcf::verify_monotone(
            series, "roundness", gcf::Direction::non_increasing, 1e-8, 1e-4)));
        for (const std::string& col : gcf::series_columns(series.sigmas))
            if (col.rfind("max_g_sigma_", 0) == 0)
                verdicts.items.push_back(
                    verdict_doc(gcf::verify_bounded_by_initial(series, col, 1e-6)));
    }

    Value report = Value::make_object();
    report.set("command", Value::make_string("run"));
    report.set("config_hash", Value::make_string(rc.config_hash));
    report.set("config", rc.doc);
    report.set("speed", Value::make_string(rc.run.speed.description));
    report.set("summary", std::move(summary));
    report.set("verdicts", std::move(verdicts));
    write_file(out_dir / "report.json", gcf::json::dump(report));

    std::cout << "run: status=" << gcf::to_string(state.status)
              << " steps=" << state.step_count
              << " t_final=" << gcf::json::format_number(state.t) << " -> "
              << (out_dir / "series.csv").string() << "\n";
    return state.status == gcf::FlowStatus::convexity_lost ? 1 : 0;
}

Value condition_doc(gcf::Verdict v) {
    Value d = Value::make_object();
    d.set("verdict", Value::make_string(gcf::to_string(v)));
    return d;
}

int cmd_check(const ResolvedConfig& rc, const fs::path& out_dir) {
    // rebuild the speed so its internal dimension matches check.n
    const gcf::SpeedSpec spec =
        rc.run.speed.kind == gcf::SpeedKind::log_power
            ? gcf::make_log_power(static_cast<int>(rc.check_n), rc.run.speed.K0)
            : gcf::make_power(rc.run.speed.alpha);

    const gcf::ConditionReport cr = gcf::check_conditions(
        spec, rc.check_K_lo, rc.check_K_hi, static_cast<int>(rc.check_n),
        static_cast<int>(rc.check_samples), rc.check_lambda_lo, rc.check_lambda_hi,
        rc.check_gamma);

    Value conds = Value::make_object();
    {
        Value d = condition_doc(cr.cond_i);
        conds.set("i_parabolicity", std::move(d));
    }
    {
        Value d = condition_doc(cr.cond_ii);
        if (cr.cond_ii == gcf::Verdict::pass) {
            d.set("alpha1", num(cr.alpha1));
            d.set("alpha2", num(cr.alpha2));
        }
        conds.set("ii_degree_bounds", std::move(d));
    }
    {
        Value d = condition_doc(cr.cond_iii);
        if (cr.cond_iii == gcf::Verdict::pass) d.set("beta", num(cr.beta));
        conds.set("iii_second_derivative", std::move(d));
    }
    {
        Value d = condition_doc(cr.cond_iv);
        if (cr.cond_iv == gcf::Verdict::pass) {
            d.set("gamma", num(cr.gamma));
            d.set("gamma_hat", num(cr.gamma_hat));
            d.set("K_threshold", num(cr.K_threshold));
            d.set("min_ratio", num(cr.min_ratio));
        }
        conds.set("iv_growth", std::move(d));
    }
    {
        Value d = condition_doc(cr.cond_v);
        if (cr.cond_v != gcf::Verdict::indeterminate) {
            d.set("min_hessian_eig", num(cr.min_hessian_eig));
            d.set("radii_samples", integer(cr.radii_samples));
        }
        conds.set("v_radii_convexity", std::move(d));
    }

    Value sampling = Value::make_object();
    sampling.set("K_lo", num(cr.K_lo));
    sampling.set("K_hi", num(cr.K_hi));
    sampling.set("samples", integer(cr.samples));
    sampling.set("lambda_lo", num(cr.lambda_lo));
    sampling.set("lambda_hi", num(cr.lambda_hi));

    Value report = Value::make_object();
    report.set("command", Value::make_string("check-speed"));
    report.set("config_hash", Value::make_string(rc.config_hash));
    report.set("config", rc.doc);
    report.set("speed", Value::make_string(spec.description));
    report.set("conditions", std::move(conds));
    report.set("overall", Value::make_string(cr.overall() ? "pass" : "fail"));
    report.set("sampling", std::move(sampling));
    write_file(out_dir / "condition_report.json", gcf::json::dump(report));

    std::cout << "check-speed: " << spec.description << " -> "
              << (cr.overall() ? "pass" : "fail") << " ("
              << (out_dir / "condition_report.json").string() << ")\n";
    return 0;
}

int cmd_scan(const ResolvedConfig& rc, const fs::path& out_dir) {
    const auto rows = gcf::theta_scan(rc.run, rc.scan_thetas);

    std::string csv = "theta,status,extinction_time,terminal_roundness,terminal_min_pinch,error\n";
    for (const gcf::ScanRow& row : rows) {
        csv += gcf::json::format_number(row.theta);
        csv += ',';
        csv += row.error.empty() ? gcf::to_string(row.status) : std::string("error");
        csv += ',';
        if (row.extinction_time) csv += gcf::json::format_number(*row.extinction_time);
        csv += ',';
        csv += gcf::json::format_number(row.terminal_roundness);
        csv += ',';
        csv += gcf::json::format_number(row.terminal_min_pinch);
        csv += ',';
        csv += csv_quote(row.error);
        csv += '\n';
    }
    write_file(out_dir / "scan.csv", csv);

    std::cout << "theta-scan: " << rows.size() << " rows -> "
              << (out_dir / "scan.csv").string() << "\n";
    return 0;
}

int cmd_convergence(const ResolvedConfig& rc, const fs::path& out_dir) {
    std::string csv = "N,max_rel_err_interior,max_rel_err_overall,observed_order\n";
    double prev_err = 0.0;
    long long prev_N = 0;

    for (long long N : rc.conv_levels) {
        const auto grid = std::make_shared<const gcf::Grid>(
            gcf::build_grid(rc.conv_mode, static_cast<int>(N)));
        gcf::ShapeSpec shape;
        shape.kind = gcf::ShapeKind::ellipsoid;
        shape.a = rc.conv_a;
        shape.c = rc.conv_c;
        const gcf::SupportField u(grid, gcf::shape_support(shape, *grid));
        const gcf::CurvatureField cf = gcf::curvature_field(u);

        // closed form for the spheroid: K = u⁴ / (a⁴ c²)
        double err_interior = 0.0, err_overall = 0.0;
        for (std::size_t i = 0; i < grid->node_count(); ++i) {
            const int j = static_cast<int>(i) / grid->n_phi;
            const double uu = u.values[i];
            const double K_exact =
                uu * uu * uu * uu / (std::pow(rc.conv_a, 4) * rc.conv_c * rc.conv_c);
            const double rel = std::abs(cf.K[i] - K_exact) / K_exact;
            err_overall = std::max(err_overall, rel);
            if (grid->theta[static_cast<std::size_t>(j)] >= M_PI / 8.0 &&
                grid->theta[static_cast<std::size_t>(j)] <= 7.0 * M_PI / 8.0)
                err_interior = std::max(err_interior, rel);
        }

        csv += std::to_string(N);
        csv += ',';
        csv += gcf::json::format_number(err_interior);
        csv += ',';
        csv += gcf::json::format_number(err_overall);
        csv += ',';
        if (prev_N > 0) {
            const double order = std::log(prev_err / err_interior) /
                                 std::log(static_cast<double>(N) / prev_N);
            csv += gcf::json::format_number(order);
        }
        csv += '\n';
        prev_err = err_interior;
        prev_N = N;
    }
    write_file(out_dir / "convergence.csv", csv);

    std::cout << "convergence-test: " << rc.conv_levels.size() << " levels -> "
              << (out_dir / "convergence.csv").string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gcflow — curvature-driven shrinking of convex bodies via the support function"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;

    CLI::App* c_run = app.add_subcommand(
        "run", "integrate the flow; emits series.csv, final_state.obj, report.json");
    CLI::App* c_check = app.add_subcommand(
        "check-speed", "verify speed admissibility; emits condition_report.json");
    CLI::App* c_scan = app.add_subcommand(
        "theta-scan", "run a ladder of initial scales; emits scan.csv");
    CLI::App* c_conv = app.add_subcommand(
        "convergence-test", "grid-refinement errors against the ellipsoid closed form; emits convergence.csv");
    for (CLI::App* c : {c_run, c_check, c_scan, c_conv}) {
        c->add_option("--config", config_path, "JSON config file")->required();
        c->add_option("--out", out_dir, "output directory, created if missing (default: .)");
        c->add_option("--set", overrides,
                      "override a config entry, e.g. --set flow.t_max=0.5 (repeatable)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // command-line misuse is a config error
    }

    try {
        if (!fs::exists(config_path))
            throw gcf::ConfigError("config file not found: " + config_path);
        std::ifstream in(config_path, std::ios::binary);
        if (!in) throw gcf::ConfigError("cannot read config file: " + config_path);
        std::stringstream buffer;
        buffer << in.rdbuf();

        Value root = gcf::json::parse(buffer.str());
        for (const std::string& s : overrides) apply_override(root, s);

        ResolvedConfig rc = resolve(root);
        const std::string command = app.get_subcommands().front()->get_name();
        rc.doc = resolved_doc(rc, command);
        rc.config_hash = fnv1a_hex(gcf::json::dump(rc.doc));

        fs::create_directories(out_dir);
        if (command == "run") return cmd_run(rc, out_dir);
        if (command == "check-speed") return cmd_check(rc, out_dir);
        if (command == "theta-scan") return cmd_scan(rc, out_dir);
        return cmd_convergence(rc, out_dir);
    } catch (const gcf::ConvexityLostError& e) {
        std::cerr << "gcflow: physics failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "gcflow: error: " << e.what() << "\n";
        return 2;
    }
}
