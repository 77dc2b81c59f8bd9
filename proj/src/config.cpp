#include "blowup/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "blowup/errors.hpp"

namespace blowup {

namespace pt = boost::property_tree;

namespace {

const std::set<std::string> known_keys = {
    "domain.dim",         "domain.radius",       "domain.center",        "weight.kind",     "weight.a0",
    "weight.g",           "weight.bump_center",  "weight.bump_amplitude", "weight.bump_width", "anchor.zeta0",
    "anchor.points",      "anchor.signs",        "sigma.family",         "sigma.solve",     "sigma.d",
    "sigma.t",            "epsilon.values",      "quadrature.samples",   "quadrature.seed", "quadrature.method",
    "quadrature.gamma3",  "quadrature.log_variant", "projection.depth", "projection.deltas", "projection.points",
    "output.dir",         "output.formats"};

template <class T>
T get_as(const pt::ptree& tree, const std::string& key, const T& fallback) {
    const auto node = tree.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    if (!node) return fallback;
    const std::string text = boost::trim_copy(*node);
    std::istringstream in(text);
    T value{};
    in >> value;
    if (in.fail() || !in.eof()) throw Error(ErrorCode::config, key + ": cannot read '" + text + "'");
    return value;
}

bool get_bool(const pt::ptree& tree, const std::string& key, bool fallback) {
    const auto node = tree.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    if (!node) return fallback;
    const std::string v = boost::to_lower_copy(boost::trim_copy(*node));
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error(ErrorCode::config, key + ": expected a boolean, got '" + *node + "'");
}

std::string get_str(const pt::ptree& tree, const std::string& key, const std::string& fallback) {
    const auto node = tree.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    return node ? boost::trim_copy(*node) : fallback;
}

std::vector<double> get_list(const pt::ptree& tree, const std::string& key, const std::vector<double>& fallback) {
    const auto node = tree.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    return node ? parse_list(key, *node) : fallback;
}

Point to_point(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void check_len(const std::string& key, const std::vector<double>& v, int dim) {
    if (!v.empty() && static_cast<int>(v.size()) != dim)
        throw Error(ErrorCode::config, key + ": expected " + std::to_string(dim) + " components, got " +
                                           std::to_string(v.size()));
}

}  // namespace

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<std::string> parts;
    boost::split(parts, text, boost::is_any_of(","));
    std::vector<double> out;
    for (auto& part : parts) {
        boost::trim(part);
        if (part.empty()) throw Error(ErrorCode::config, key + ": empty list entry");
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != part.size()) throw Error(ErrorCode::config, key + ": cannot read '" + part + "' as a number");
        out.push_back(v);
    }
    return out;
}

RunConfig parse_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw Error(ErrorCode::config, "line " + std::to_string(e.line()) + ": " + e.message());
    }
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw Error(ErrorCode::config, section + ": keys must live in a [section]");
        for (const auto& kv : body) {
            const std::string key = section + "." + kv.first;
            if (!known_keys.count(key)) throw Error(ErrorCode::config, key + ": unknown key");
        }
    }

    RunConfig c;
    c.dim = get_as<int>(tree, "domain.dim", c.dim);
    c.radius = get_as<double>(tree, "domain.radius", c.radius);
    c.center = get_list(tree, "domain.center", {});

    c.weight_kind = get_str(tree, "weight.kind", c.weight_kind);
    c.a0 = get_as<double>(tree, "weight.a0", c.a0);
    c.g = get_list(tree, "weight.g", {});
    c.bump_center = get_list(tree, "weight.bump_center", {});
    c.bump_amplitude = get_as<double>(tree, "weight.bump_amplitude", c.bump_amplitude);
    c.bump_width = get_as<double>(tree, "weight.bump_width", c.bump_width);

    c.zeta0 = get_list(tree, "anchor.zeta0", {});
    if (auto pts = tree.get_optional<std::string>(pt::ptree::path_type("anchor.points", '.'))) {
        std::vector<std::string> items;
        boost::split(items, *pts, boost::is_any_of(";"));
        for (const auto& item : items) c.anchors.push_back(parse_list("anchor.points", item));
    }
    for (double s : get_list(tree, "anchor.signs", {})) {
        if (s != 0.0 && s != 1.0) throw Error(ErrorCode::config, "anchor.signs: entries must be 0 or 1");
        c.signs.push_back(static_cast<int>(s));
    }

    c.family = get_str(tree, "sigma.family", c.family);
    c.sigma.solve = get_bool(tree, "sigma.solve", true);
    c.sigma.d = get_list(tree, "sigma.d", {});
    c.sigma.t = get_list(tree, "sigma.t", {});

    c.epsilon = get_list(tree, "epsilon.values", c.epsilon);

    c.depth = get_as<double>(tree, "projection.depth", c.depth);
    c.deltas = get_list(tree, "projection.deltas", c.deltas);
    c.sandwich_points = get_as<int>(tree, "projection.points", c.sandwich_points);

    try {
        c.method = parse_quad_method(get_str(tree, "quadrature.method", to_string(c.method)));
    } catch (const Error& e) {
        throw Error(ErrorCode::config, "quadrature.method: " + e.detail());
    }
    c.samples = get_as<std::uint64_t>(tree, "quadrature.samples", c.samples);
    if (tree.get_optional<std::string>(pt::ptree::path_type("quadrature.seed", '.')))
        c.seed = get_as<std::uint64_t>(tree, "quadrature.seed", 0);
    try {
        c.gamma3 = parse_gamma3_variant(get_str(tree, "quadrature.gamma3", to_string(c.gamma3)));
        c.log_variant = parse_log_variant(get_str(tree, "quadrature.log_variant", to_string(c.log_variant)));
    } catch (const Error& e) {
        throw Error(ErrorCode::config, "quadrature: " + e.detail());
    }

    c.out_dir = get_str(tree, "output.dir", c.out_dir);
    if (auto f = tree.get_optional<std::string>(pt::ptree::path_type("output.formats", '.'))) {
        c.formats.clear();
        boost::split(c.formats, *f, boost::is_any_of(","));
        for (auto& s : c.formats) boost::trim(s);
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void RunConfig::validate() const {
    if (dim < 5) throw Error(ErrorCode::dimension_out_of_range, "domain.dim: N >= 5 required, got " + std::to_string(dim));
    if (!(radius > 0)) throw Error(ErrorCode::config, "domain.radius: must be positive");
    check_len("domain.center", center, dim);
    check_len("weight.g", g, dim);
    check_len("weight.bump_center", bump_center, dim);
    check_len("anchor.zeta0", zeta0, dim);
    for (const auto& a : anchors) check_len("anchor.points", a, dim);
    if (weight_kind != "affine" && weight_kind != "affine_plus_bump")
        throw Error(ErrorCode::config, "weight.kind: expected affine or affine_plus_bump, got '" + weight_kind + "'");
    if (weight_kind == "affine_plus_bump" && bump_center.empty())
        throw Error(ErrorCode::config, "weight.bump_center: required for affine_plus_bump");
    if (!(bump_width > 0)) throw Error(ErrorCode::config, "weight.bump_width: must be positive");
    if (!signs.empty() && signs.size() != anchor_list().size())
        throw Error(ErrorCode::config, "anchor.signs: one entry per anchor");
    if (family != "pair" && family != "single")
        throw Error(ErrorCode::config, "sigma.family: expected pair or single, got '" + family + "'");
    if (!sigma.solve) {
        const std::size_t want = family == "pair" ? 2 : anchor_list().size();
        if (sigma.d.size() != want) throw Error(ErrorCode::config, "sigma.d: expected " + std::to_string(want) + " values");
        if (sigma.t.size() != want) throw Error(ErrorCode::config, "sigma.t: expected " + std::to_string(want) + " values");
        for (double v : sigma.d)
            if (!(v > 0)) throw Error(ErrorCode::config, "sigma.d: entries must be positive");
        for (double v : sigma.t)
            if (!(v > 0)) throw Error(ErrorCode::config, "sigma.t: entries must be positive");
        if (family == "pair" && !(sigma.t[0] < sigma.t[1]))
            throw Error(ErrorCode::config, "sigma.t: pair requires t1 < t2");
    }
    if (epsilon.empty()) throw Error(ErrorCode::config, "epsilon.values: at least one value required");
    for (std::size_t i = 0; i < epsilon.size(); ++i) {
        if (!(epsilon[i] > 0)) throw Error(ErrorCode::config, "epsilon.values: entries must be strictly positive");
        if (i > 0 && !(epsilon[i] < epsilon[i - 1]))
            throw Error(ErrorCode::config, "epsilon.values: entries must be strictly decreasing");
    }
    if (!(depth > 0 && depth < 0.5)) throw Error(ErrorCode::config, "projection.depth: must lie in (0, 0.5)");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0 && deltas[i] < depth))
            throw Error(ErrorCode::config, "projection.deltas: entries must lie in (0, projection.depth)");
        if (i > 0 && !(deltas[i] < deltas[i - 1]))
            throw Error(ErrorCode::config, "projection.deltas: entries must be strictly decreasing");
    }
    if (sandwich_points < 1) throw Error(ErrorCode::config, "projection.points: must be positive");
    if (samples == 0) throw Error(ErrorCode::config, "quadrature.samples: must be positive");
    if (method == QuadMethod::monte_carlo && !seed)
        throw Error(ErrorCode::config, "quadrature.seed: required when quadrature.method = monte_carlo");
    for (const auto& f : formats)
        if (f != "json" && f != "csv") throw Error(ErrorCode::config, "output.formats: unknown format '" + f + "'");
}

BallDomain RunConfig::domain() const {
    BallDomain d = BallDomain::unit(dim);
    if (!center.empty()) d.center = to_point(center);
    d.radius = radius;
    return d;
}

WeightField RunConfig::weight() const {
    Point gv = Point::Zero(dim);
    if (g.empty())
        gv[0] = 1.0;
    else
        gv = to_point(g);
    if (weight_kind == "affine_plus_bump")
        return WeightField::with_bump(a0, gv, to_point(bump_center), bump_amplitude, bump_width);
    return WeightField::affine(a0, gv);
}

Point RunConfig::anchor() const {
    if (!zeta0.empty()) return to_point(zeta0);
    const BallDomain d = domain();
    Point z = d.center;
    z[0] -= d.radius;
    return z;
}

std::vector<Point> RunConfig::anchor_list() const {
    if (anchors.empty()) return {anchor()};
    std::vector<Point> out;
    for (const auto& a : anchors) out.push_back(to_point(a));
    return out;
}

}  // namespace blowup
