#include "blowup/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "blowup/errors.hpp"
#include "blowup/projection.hpp"
#include "blowup/reduced_energy.hpp"
#include "blowup/rng.hpp"

namespace blowup {

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::uint64_t need_seed(const RunConfig& cfg, const std::string& name) {
    if (!cfg.seed) throw Error(ErrorCode::config, "quadrature.seed: required by " + name);
    return *cfg.seed;
}

Point random_in_ball(CounterRng& rng, const Point& center, double radius) {
    const int N = static_cast<int>(center.size());
    return center + radius * std::pow(rng.uniform(), 1.0 / N) * random_direction(rng, N);
}

QuadratureSpec quad_spec(const RunConfig& cfg) {
    QuadratureSpec q;
    q.method = cfg.method;
    q.sample_count = cfg.samples;
    q.seed = cfg.seed.value_or(1);
    return q;
}

UniversalConstants closed_constants(const RunConfig& cfg) {
    QuadratureSpec q;
    q.method = QuadMethod::closed_form;
    return universal_constants(cfg.dim, cfg.gamma3, q);
}

// ---- constants ------------------------------------------------------------------

ReportEnvelope run_constants(const RunConfig& cfg) {
    ReportEnvelope env;
    const int N = cfg.dim;
    const DimensionParams dp = dimension_params(N);
    env.add("p.rational", dp.p.num * (N - 4) == 2 * N * dp.p.den, "p (N-4) = 2N in rational arithmetic")
        .payload = {Quantity::closed("p_num", double(dp.p.num)), Quantity::closed("p_den", double(dp.p.den))};

    Table t{"constants", {"quantity", "method", "value", "stderr", "tag"}, {}};
    QuadratureSpec radial;
    radial.method = QuadMethod::radial_gauss;
    const QuadratureSpec chosen = quad_spec(cfg);
    if (chosen.method == QuadMethod::monte_carlo) need_seed(cfg, "constants with method monte_carlo");

    struct Item {
        std::string name;
        double closed;
        std::function<Estimate(const QuadratureSpec&)> eval;
    };
    const std::vector<Item> items = {
        {"gamma1", gamma1_closed(N), [&](const QuadratureSpec& q) { return gamma1(N, q); }},
        {"gamma2", gamma2_closed(N), [&](const QuadratureSpec& q) { return gamma2(N, q); }},
        {"gamma3", gamma3_closed(N, cfg.gamma3), [&](const QuadratureSpec& q) { return gamma3(N, cfg.gamma3, q); }},
    };
    std::map<std::string, double> chosen_value;
    for (const auto& it : items) {
        const Estimate r = it.eval(radial);
        const double e = rel(r.value, it.closed);
        auto& c = env.add(it.name + ".radial_gauss", e <= 1e-8, "relative error " + cell(e) + " against the closed form");
        c.payload = {Quantity::closed(it.name + "_closed", it.closed), Quantity::det(it.name + "_radial", r.value)};
        t.rows.push_back({it.name, "closed_form", cell(it.closed), "", "closed_form"});
        t.rows.push_back({it.name, "radial_gauss", cell(r.value), "", "deterministic"});
        chosen_value[it.name] = chosen.method == QuadMethod::radial_gauss ? r.value : it.closed;
        if (chosen.method == QuadMethod::monte_carlo) {
            const Estimate m = it.eval(chosen);
            const double z = std::abs(m.value - it.closed) / m.err;
            auto& mc = env.add(it.name + ".monte_carlo", z <= 3.0, "deviation " + cell(z) + " sigma");
            mc.payload = {Quantity::est(it.name + "_mc", m)};
            t.rows.push_back({it.name, "monte_carlo", cell(m.value), cell(m.err), "estimate"});
            chosen_value[it.name] = m.value;
        }
    }
    try {
        const Omegas w = omegas(N, chosen_value["gamma1"], chosen_value["gamma2"]);
        auto& c = env.add("omegas.positive", true);
        c.payload = {Quantity::closed("omega2", w.omega2), Quantity::closed("omega3", w.omega3),
                     Quantity::closed("omega4", w.omega4)};
        t.rows.push_back({"omega2", to_string(chosen.method), cell(w.omega2), "", "closed_form"});
        t.rows.push_back({"omega3", to_string(chosen.method), cell(w.omega3), "", "closed_form"});
        t.rows.push_back({"omega4", to_string(chosen.method), cell(w.omega4), "", "closed_form"});
    } catch (const Error& e) {
        env.add("omegas.positive", false, e.what());
    }
    env.add("alpha_N", true).payload = {Quantity::closed("alpha_N", dp.alpha_N), Quantity::closed("gamma_N", dp.gamma_N)};
    env.tables.push_back(std::move(t));
    return env;
}

// ---- bubble-check ---------------------------------------------------------------

ReportEnvelope run_bubble_check(const RunConfig& cfg) {
    ReportEnvelope env;
    const int N = cfg.dim;
    const DimensionParams dp = dimension_params(N);
    const std::uint64_t seed = cfg.seed.value_or(1);
    const Point origin = Point::Zero(N);

    {
        CounterRng rng(stream_key(seed, "bubbles", "scale_covariance", 0));
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double delta = std::exp(std::log(0.1) + rng.uniform() * std::log(20.0));
            const Point xi = random_in_ball(rng, origin, 1.0);
            const Point x = random_in_ball(rng, origin, 2.0);
            const double lhs = u_eval(dp, {delta, xi}, x);
            const double rhs = std::pow(delta, -dp.a()) * u_eval(dp, {1.0, origin}, (x - xi) / delta);
            worst = std::max(worst, rel(lhs, rhs));
        }
        env.add("u.scale_covariance", worst <= 1e-12, "1000 random tuples").payload = {
            Quantity::det("max_rel_error", worst)};
    }
    {
        CounterRng rng(stream_key(seed, "bubbles", "monotone", 0));
        bool ok = true;
        const Bubble b{0.5, origin};
        for (int ray = 0; ray < 10; ++ray) {
            const Point dir = random_direction(rng, N);
            double prev = u_eval(dp, b, origin);
            for (int k = 1; k <= 200 && ok; ++k) {
                const double v = u_eval(dp, b, 0.05 * k * dir);
                ok = v > 0.0 && v < prev;
                prev = v;
            }
        }
        env.add("u.positive_decreasing", ok, "10 rays, 200 radii each");
    }
    {
        const double center = u_laplacian(dp, {1.0, origin}, origin);
        const double expect = -2.0 * dp.a() * N * dp.alpha_N;
        CounterRng rng(stream_key(seed, "bubbles", "laplacian", 0));
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Bubble b{0.5 + rng.uniform(), random_in_ball(rng, origin, 0.5)};
            const Point x = random_in_ball(rng, origin, 2.0);
            auto fd = [&](double h) {
                double s = 0.0;
                Point y = x;
                for (int j = 0; j < N; ++j) {
                    y[j] = x[j] + h;
                    s += u_eval(dp, b, y);
                    y[j] = x[j] - h;
                    s += u_eval(dp, b, y);
                    y[j] = x[j];
                }
                return (s - 2.0 * N * u_eval(dp, b, x)) / (h * h);
            };
            const double extrap = (4.0 * fd(5e-4) - fd(1e-3)) / 3.0;
            worst = std::max(worst, rel(u_laplacian(dp, b, x), extrap));
        }
        auto& c = env.add("u_laplacian.center_and_fd", rel(center, expect) <= 1e-13 && worst <= 1e-6,
                          "value at the center and Richardson FD at 20 points");
        c.payload = {Quantity::closed("laplacian_at_center", expect), Quantity::det("max_fd_rel_error", worst)};
    }
    {
        CounterRng rng(stream_key(seed, "bubbles", "residual", 0));
        Table t{"residual", {"point", "h", "residual"}, {}};
        Table s{"residual_order", {"point", "radius", "slope"}, {}};
        const std::vector<double> steps{0.04, 0.02, 0.01};
        const Bubble b{1.0, origin};
        bool ok = true;
        double lo = 1e300, hi = -1e300;
        for (int i = 0; i < 20; ++i) {
            const Point x = random_in_ball(rng, origin, 1.5);
            for (double h : steps) t.rows.push_back({std::to_string(i), cell(h), cell(limit_equation_residual(dp, b, x, h))});
            const double slope = residual_order(dp, b, x, steps);
            s.rows.push_back({std::to_string(i), cell(x.norm()), cell(slope)});
            lo = std::min(lo, slope);
            hi = std::max(hi, slope);
            ok = ok && std::abs(slope - 2.0) <= 0.3;
        }
        env.add("residual.order", ok, "order 2 +- 0.3 at 20 points").payload = {Quantity::det("min_slope", lo),
                                                                               Quantity::det("max_slope", hi)};
        env.tables.push_back(std::move(t));
        env.tables.push_back(std::move(s));
    }
    {
        CounterRng rng(stream_key(seed, "bubbles", "kernel", 0));
        Table t{"kernel", {"point", "j", "analytic", "fd", "rel_err"}, {}};
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Bubble b{0.3 + rng.uniform(), random_in_ball(rng, origin, 0.5)};
            const Point x = random_in_ball(rng, origin, 2.0);
            // errors are relative to the natural scale U/delta where a component happens to vanish
            const double scale = 1e-3 * u_eval(dp, b, x) / b.delta;
            for (int j = 0; j <= N; ++j) {
                const double an = kernel_eval(dp, b, j, x), fd = kernel_fd(dp, b, j, x);
                const double e = std::abs(an - fd) / std::max(std::abs(an), scale);
                worst = std::max(worst, e);
                t.rows.push_back({std::to_string(i), std::to_string(j), cell(an), cell(fd), cell(e)});
            }
        }
        env.add("kernel.fd", worst <= 1e-6, "all N+1 kernel functions at 20 points").payload = {
            Quantity::det("max_rel_error", worst)};
        env.tables.push_back(std::move(t));
    }
    {
        bool ok = f_ell(1.0, 0.0, N) == 1.0;
        for (double e : {0.0, 0.01, 0.1}) ok = ok && f_ell(-1.0, e, N) == -1.0 && f_ell(-0.7, e, N) == -f_ell(0.7, e, N);
        const double u = 1.3;
        ok = ok && rel(f_ell(u, 0.0, N), std::pow(u, dp.p_value - 1.0)) <= 1e-14;
        env.add("f_ell.odd_and_critical", ok);
    }
    return env;
}

// ---- green-check ----------------------------------------------------------------

ReportEnvelope run_green_check(const RunConfig& cfg) {
    ReportEnvelope env;
    const std::uint64_t seed = need_seed(cfg, "green-check");
    const int N = cfg.dim;
    const DimensionParams dp = dimension_params(N);
    const BallDomain dom = cfg.domain();
    const GreenBall g(dp, dom);
    const bool unit = dom.radius == 1.0 && dom.center.norm() == 0.0;
    const std::uint64_t light = std::max<std::uint64_t>(cfg.samples / 10, 100000);

    if (unit) {
        const double factor = manufactured_integral_center(g) / dp.gamma_N;
        env.add("hat_gamma.center", std::abs(factor - 2.0) <= 1e-6, "deterministic quadrature at x = 0").payload = {
            Quantity::det("hat_gamma_over_gamma_N", factor)};

        CounterRng rng(stream_key(seed, "green_ball", "manufactured_points", 0));
        std::vector<Point> cal, fresh;
        for (int i = 0; i < 3; ++i) cal.push_back(random_in_ball(rng, dom.center, 0.6));
        for (int i = 0; i < 5; ++i) fresh.push_back(random_in_ball(rng, dom.center, 0.6));
        const ManufacturedReport m = manufactured_solution_check(g, cal, fresh, cfg.samples, seed);
        auto& c = env.add("manufactured", m.max_rel_error < 0.02 && m.factor_snapped == 2.0,
                          "w = (1-r^2)^3 at 5 fresh points after calibration");
        c.payload = {Quantity::est("hat_gamma_calibrated", m.hat_gamma_calibrated, m.hat_gamma_err),
                     Quantity::est("factor", m.factor, m.hat_gamma_err / dp.gamma_N),
                     Quantity::closed("factor_snapped", m.factor_snapped),
                     Quantity::det("max_rel_error", m.max_rel_error)};
        Table t{"manufactured", {"point", "radius", "rel_err", "rel_err_snapped"}, {}};
        for (std::size_t i = 0; i < fresh.size(); ++i)
            t.rows.push_back({std::to_string(i), cell(fresh[i].norm()), cell(m.rel_errors[i]), cell(m.rel_errors_snapped[i])});
        env.tables.push_back(std::move(t));
    } else {
        env.checks.push_back({"manufactured", CheckStatus::excluded, "defined on the unit ball only", {}});
    }

    {
        CounterRng rng(stream_key(seed, "green_ball", "symmetry_points", 0));
        Table t{"symmetry", {"pair", "h_xy", "err_xy", "h_yx", "err_yx", "closed_form", "z_sym", "z_closed"}, {}};
        double zmax = 0.0, zcf = 0.0;
        for (int i = 0; i < 20; ++i) {
            const Point x = random_in_ball(rng, dom.center, 0.9 * dom.radius);
            const Point y = random_in_ball(rng, dom.center, 0.9 * dom.radius);
            const Estimate a = h_biharm_mc(g, x, y, light, seed, 2 * i + 1);
            const Estimate b = h_biharm_mc(g, y, x, light, seed, 2 * i + 2);
            const double cf = g.h_biharm(x, y);
            const double z = std::abs(a.value - b.value) / std::hypot(a.err, b.err);
            const double zc = std::abs(0.5 * (a.value + b.value) - cf) / (0.5 * std::hypot(a.err, b.err));
            zmax = std::max(zmax, z);
            zcf = std::max(zcf, zc);
            t.rows.push_back({std::to_string(i), cell(a.value), cell(a.err), cell(b.value), cell(b.err), cell(cf),
                              cell(z), cell(zc)});
        }
        // G = |x-y|^{4-N} - H shares the error bars of H, so the same z applies.
        env.add("symmetry.H", zmax <= 3.0, "20 pairs, boundary-split estimates in both orders").payload = {
            Quantity::det("max_z", zmax)};
        env.add("symmetry.G", zmax <= 3.0, "20 pairs, G = |x-y|^{4-N} - H").payload = {Quantity::det("max_z", zmax)};
        env.add("H.closed_vs_split", zcf <= 4.0, "closed form against the boundary split").payload = {
            Quantity::det("max_z", zcf)};
        env.tables.push_back(std::move(t));
    }
    {
        Point base = dom.center, y = dom.center;
        base[0] -= dom.radius;
        y[1] += 0.3 * dom.radius;
        std::vector<double> depths;
        for (double d : {0.2, 0.1, 0.05, 0.025, 0.0125}) depths.push_back(d * dom.radius);
        const LahReport r = lah_sweep(g, base, y, depths, 1e-3 * dom.radius);
        const bool ok = r.h_fit.slope >= 0.7 && r.h_fit.slope <= 1.3 && r.lap_fit.slope >= 0.7 && r.lap_fit.slope <= 1.3;
        env.add("lah.slopes", ok, "depth sweep slopes in [0.7, 1.3]").payload = {
            Quantity::det("h_slope", r.h_fit.slope), Quantity::det("lap_h_slope", r.lap_fit.slope)};
        Table t{"lah", {"depth", "ratio_h", "ratio_lap_h"}, {}};
        for (const auto& row : r.rows) t.rows.push_back({cell(row.depth), cell(row.ratio_h), cell(row.ratio_lap_h)});
        env.tables.push_back(std::move(t));
    }
    {
        CounterRng rng(stream_key(seed, "green_ball", "composition_points", 0));
        double zmax = 0.0;
        auto& c = env.add("composition", true, "int G_lap G_lap = (N-2)|S|/(2(N-4)) G at 3 pairs");
        for (int i = 0; i < 3; ++i) {
            const Point x = random_in_ball(rng, dom.center, 0.7 * dom.radius);
            const Point y = random_in_ball(rng, dom.center, 0.7 * dom.radius);
            const Estimate e = composition_mc(g, x, y, light, seed, 100 + i);
            const double expect = g.lap_constant() / (2.0 * (N - 4)) * g.g_biharm(x, y);
            zmax = std::max(zmax, std::abs(e.value - expect) / e.err);
            c.payload.push_back(Quantity::est("composition_" + std::to_string(i), e));
            c.payload.push_back(Quantity::closed("expected_" + std::to_string(i), expect));
        }
        c.status = zmax <= 4.0 ? CheckStatus::pass : CheckStatus::fail;
        c.payload.push_back(Quantity::det("max_z", zmax));
    }
    return env;
}

// ---- projection-scan ------------------------------------------------------------

ReportEnvelope run_projection_scan(const RunConfig& cfg) {
    ReportEnvelope env;
    const std::uint64_t seed = need_seed(cfg, "projection-scan");
    const int N = cfg.dim;
    const DimensionParams dp = dimension_params(N);
    const BallDomain dom = cfg.domain();
    const GreenBall g(dp, dom);
    const double R = dom.radius;

    {
        Point xi = dom.center;
        xi[0] -= (1.0 - cfg.depth) * R;
        const ProjectedBubble pb(g, Bubble{0.05 * R, xi});
        CounterRng rng(stream_key(seed, "projection_integrals", "sandwich_points", 0));
        const std::uint64_t n = std::max<std::uint64_t>(cfg.samples / 10, 1000);
        Table t{"sandwich", {"point", "radius", "pu", "stderr", "u", "inside"}, {}};
        int bad = 0;
        for (int i = 0; i < cfg.sandwich_points; ++i) {
            const Point x = random_in_ball(rng, dom.center, R);
            const Estimate e = pb.pu_oracle(x, n, seed, i + 1);
            const double u = pb.u(x);
            const bool ok = e.value >= -3.0 * e.err && e.value <= u + 3.0 * e.err;
            if (!ok) ++bad;
            t.rows.push_back({std::to_string(i), cell((x - dom.center).norm()), cell(e.value), cell(e.err), cell(u), cell(ok)});
        }
        env.add("pu.sandwich", bad == 0, "0 <= PU <= U within 3 sigma at " + std::to_string(cfg.sandwich_points) + " points")
            .payload = {Quantity::closed("violations", bad)};
        env.tables.push_back(std::move(t));
    }
    {
        std::vector<double> deltas;
        for (double d : cfg.deltas) deltas.push_back(d * R);
        const RemainderScan s = remainder_scan(g, cfg.depth * R, deltas, cfg.samples, seed);
        const bool ok = s.fit.fitted && std::abs(s.fit.slope - 0.5 * N) <= 0.5;
        env.add("remainder.slope", ok, "sup |R| against delta, slope N/2 +- 0.5").payload = {
            Quantity::det("slope", s.fit.slope), Quantity::closed("target", 0.5 * N),
            Quantity::det("fit_residual", s.fit.fit_residual)};
        Table t{"remainder", {"delta", "sup_remainder", "stderr", "excluded"}, {}};
        for (const auto& r : s.rows) t.rows.push_back({cell(r.delta), cell(r.sup), cell(r.err), cell(r.excluded)});
        env.tables.push_back(std::move(t));
    }
    {
        Point xi = dom.center;
        xi[0] -= (1.0 - cfg.depth) * R;
        std::vector<double> deltas;
        for (double d : cfg.deltas) deltas.push_back(d * R);
        const ScalingReport s = lap_pu_norm_scan(g, xi, deltas, cfg.samples, seed);
        bool decreasing = true;
        for (std::size_t i = 1; i < s.points.size(); ++i) decreasing = decreasing && s.points[i].value < s.points[i - 1].value;
        const double bound = (N - 4.0) / (2.0 * (N - 3));
        env.add("lap_pu_norm.slope", s.fitted && s.slope >= bound && decreasing,
                "|Delta PU|_{2N/(N+4)} slope >= (N-4)/(2(N-3)) and decreasing in delta")
            .payload = {Quantity::det("slope", s.slope), Quantity::closed("bound", bound)};
        Table t{"lap_norm", {"delta", "norm", "stderr", "excluded"}, {}};
        for (const auto& p : s.points) t.rows.push_back({cell(p.abscissa), cell(p.value), cell(p.err), cell(p.excluded)});
        env.tables.push_back(std::move(t));
    }
    return env;
}

// ---- asymptotics ----------------------------------------------------------------

ReportEnvelope run_asymptotics(const RunConfig& cfg) {
    ReportEnvelope env;
    const std::uint64_t seed = need_seed(cfg, "asymptotics");
    const int N = cfg.dim;
    const DimensionParams dp = dimension_params(N);
    const BallDomain dom = cfg.domain();
    const GreenBall g(dp, dom);
    const WeightField a = cfg.weight();
    const UniversalConstants c = closed_constants(cfg);
    const ConfigPair cp = resolve_pair(cfg, c);
    const Point& z = cp.zeta0;

    Table t{"integrals", {"integral_name", "epsilon", "measured", "stderr", "prediction", "ratio"}, {}};
    auto row = [&](const std::string& name, double eps, const IntegralEstimate& e) {
        t.rows.push_back({name, cell(eps), cell(e.measured), cell(e.measured_err), cell(e.prediction), cell(e.ratio())});
    };
    IntegralEstimate self, corr, inter;
    std::vector<double> cross_g, cross_g_err, cross_l, cross_l_err;
    std::uint64_t tag = 0;
    for (double eps : cfg.epsilon) {
        self = self_energy(g, a, z, cp.d1, cp.t1, eps, cfg.samples, subseed(seed, ++tag));
        corr = correction_integral(g, a, z, cp.d1, cp.t1, eps, cfg.samples, subseed(seed, ++tag));
        inter = interaction_integral(g, a, z, z, cp.d1, cp.d2, cp.t1, cp.t2, eps, cfg.samples, subseed(seed, ++tag));
        const CrossTerms x = cross_terms(g, a, cp, eps, cfg.samples, subseed(seed, ++tag));
        row("self_energy", eps, self);
        row("correction", eps, corr);
        row("interaction", eps, inter);
        t.rows.push_back({"cross_grad", cell(eps), cell(x.grad_term.value), cell(x.grad_term.err), "0", ""});
        t.rows.push_back({"cross_lap", cell(eps), cell(x.lap_term.value), cell(x.lap_term.err), "0", ""});
        cross_g.push_back(std::abs(x.grad_term.value));
        cross_g_err.push_back(x.grad_term.err);
        cross_l.push_back(std::abs(x.lap_term.value));
        cross_l_err.push_back(x.lap_term.err);
    }
    const std::string at = "at eps = " + cell(cfg.epsilon.back());
    auto coeff = [&](const std::string& id, const IntegralEstimate& e, bool sign_ok) {
        env.add(id, sign_ok && std::abs(e.ratio() - 1.0) <= 0.15, "first-order coefficient within 15% " + at).payload = {
            Quantity::est("measured", e.measured, e.measured_err), Quantity::closed("prediction", e.prediction)};
    };
    coeff("self_energy.coefficient", self, true);
    coeff("correction.coefficient", corr, corr.measured < 0);
    coeff("interaction.coefficient", inter, inter.measured > 0);

    auto shrinking = [](const std::vector<double>& v, const std::vector<double>& e) {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] > v[i - 1] + 2.0 * (e[i] + e[i - 1])) return false;
        return true;
    };
    env.add("cross_terms.vanishing", shrinking(cross_g, cross_g_err) && shrinking(cross_l, cross_l_err),
            "|value|/eps nonincreasing along the grid within error bars")
        .payload = {Quantity::est("grad_term_last", cross_g.back(), cross_g_err.back()),
                    Quantity::est("lap_term_last", cross_l.back(), cross_l_err.back())};

    if (cfg.epsilon.size() >= 3) {
        const LogSlope ls = log_integral_slope(g, a, cp, cfg.epsilon, cfg.samples, subseed(seed, ++tag),
                                               c.gamma1.value, c.gamma3.value);
        for (std::size_t i = 0; i < ls.eps.size(); ++i)
            t.rows.push_back({"log_integral", cell(ls.eps[i]), cell(ls.values[i].value), cell(ls.values[i].err), "", ""});
        env.add("log_integral.slope", std::abs(ls.slope / ls.prediction - 1.0) <= 0.10,
                "regression slope against log eps within 10% of -(N-3) a(zeta0) gamma1")
            .payload = {Quantity::det("slope", ls.slope), Quantity::closed("prediction", ls.prediction)};
    } else {
        env.checks.push_back({"log_integral.slope", CheckStatus::excluded, "needs at least 3 epsilon values", {}});
    }
    env.add("sigma", true, "pair parameters used").payload = {
        Quantity::det("d1", cp.d1), Quantity::det("d2", cp.d2), Quantity::det("t1", cp.t1), Quantity::det("t2", cp.t2)};
    env.tables.push_back(std::move(t));
    return env;
}

// ---- critical-points ------------------------------------------------------------

ReportEnvelope run_critical_points(const RunConfig& cfg) {
    ReportEnvelope env;
    const int N = cfg.dim;
    const DimensionParams dp = dimension_params(N);
    const BallDomain dom = cfg.domain();
    const WeightField a = cfg.weight();
    const UniversalConstants c = closed_constants(cfg);
    Table t{"parameters", {"problem", "anchor", "name", "value"}, {}};

    const auto anchors = cfg.anchor_list();
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const std::string id = std::to_string(i);
        const WeightReport w = weight_checks(dom, a, anchors[i]);
        env.add("weight.p2." + id, w.p2_holds(), "critical, nondegenerate, inward derivative > 0, a > 0").payload = {
            Quantity::det("tangential_gradient", w.tangential_gradient_norm),
            Quantity::det("normal_derivative", w.normal_derivative), Quantity::det("min_value", w.min_value)};
        if (w.normal_derivative <= 0) continue;
        const AnchorData ad = anchor_data(dom, a, anchors[i]);
        const CriticalPointReport r = f1_critical(N, c, ad);
        const double d = r.location[0], tt = r.location[1];
        const double e1 = rel(std::pow(d / (2 * tt), N - 4.0), c.gamma1.value / (dp.p_value * c.gamma2.value));
        const double e2 = rel(tt, ad.a0 * (N - 4) / ((dp.p_value - 2) * ad.s));
        env.add("f1.critical." + id, r.converged && e1 <= 1e-8 && e2 <= 1e-8, "block identities to 1e-8").payload = {
            Quantity::det("d", d), Quantity::det("t", tt), Quantity::det("identity_d_rel", e1),
            Quantity::det("identity_t_rel", e2)};
        t.rows.push_back({"F1", id, "d", cell(d)});
        t.rows.push_back({"F1", id, "t", cell(tt)});
    }
    {
        QuadratureSpec q;
        const UniversalConstants c5 = universal_constants(5, cfg.gamma3, q);
        const CriticalPointReport r = f1_critical(5, c5, AnchorData{1.0, 1.0});
        const bool ok = rel(r.location[1], 0.125) <= 1e-8 && std::abs(r.location[0] - 0.0161) <= 5e-5;
        env.add("f1.reference", ok, "N = 5, a = 1, s = 1: t* = 0.125, d* ~ 0.0161").payload = {
            Quantity::det("d", r.location[0]), Quantity::det("t", r.location[1])};
    }
    if (cfg.family == "pair") {
        const AnchorData ad = anchor_data(dom, a, cfg.anchor());
        const F2Data f = f2_data(N, c, ad, cfg.log_variant);
        const CriticalPointReport r = f2_minimize(f);
        bool pd = !r.hessian_eigenvalues.empty();
        for (double e : r.hessian_eigenvalues) pd = pd && e > 0;
        auto& ch = env.add("f2.minimize", r.converged && pd, "Newton converged with positive definite Hessian");
        const char* names[] = {"d1", "d2", "t1", "t2"};
        for (int k = 0; k < 4; ++k) {
            ch.payload.push_back(Quantity::det(names[k], r.location[k]));
            t.rows.push_back({"F2", "0", names[k], cell(r.location[k])});
        }
        ch.payload.push_back(Quantity::det("value", r.value));
        ch.payload.push_back(Quantity::det("gradient_norm", r.gradient_norm));
        for (std::size_t k = 0; k < r.hessian_eigenvalues.size(); ++k)
            ch.payload.push_back(Quantity::det("hessian_eigenvalue_" + std::to_string(k), r.hessian_eigenvalues[k]));
        t.rows.push_back({"F2", "0", "value", cell(r.value)});

        const GridResult gr = f2_grid_search(f);
        bool basin = gr.value >= r.value;
        for (int k = 0; k < 4; ++k) basin = basin && std::abs(std::log(gr.best[k] / r.location[k])) <= gr.log_step;
        env.add("f2.grid_basin", basin, "20^4 log grid best node within one log step of the minimizer").payload = {
            Quantity::det("grid_value", gr.value), Quantity::det("log_step", gr.log_step)};
    }
    env.tables.push_back(std::move(t));
    return env;
}

// ---- residual-scan --------------------------------------------------------------

ReportEnvelope run_residual_scan(const RunConfig& cfg) {
    ReportEnvelope env;
    const std::uint64_t seed = need_seed(cfg, "residual-scan");
    const int N = cfg.dim;
    const DimensionParams dp = dimension_params(N);
    const BallDomain dom = cfg.domain();
    const GreenBall g(dp, dom);
    const WeightField a = cfg.weight();
    const UniversalConstants c = closed_constants(cfg);
    const ConfigPair cp = resolve_pair(cfg, c);
    const ConfigK ck = resolve_single(cfg, c);

    struct Family {
        std::string name;
        std::function<std::vector<SignedBubble>(double)> bubbles;
    };
    const std::vector<Family> fams = {
        {"sigma1", [&](double e) { return bubbles_of(dom, ck, e, delta_exponent(N)); }},
        {"sigma2", [&](double e) { return bubbles_of(dom, cp, e, delta_exponent(N)); }},
        {"misscaled", [&](double e) { return bubbles_of(dom, cp, e, 1.0); }},
    };
    Table t{"error_norm", {"family", "epsilon", "norm", "stderr", "excluded"}, {}};
    std::map<std::string, double> slope;
    std::uint64_t tag = 0;
    for (const auto& f : fams) {
        ScalingReport s;
        s.name = f.name;
        for (double eps : cfg.epsilon) {
            const Estimate e = error_norm(g, a, f.bubbles(eps), eps, cfg.samples, subseed(seed, ++tag));
            s.points.push_back({eps, e.value, e.err, false});
        }
        fit_scaling(s);
        for (const auto& p : s.points)
            t.rows.push_back({f.name, cell(p.abscissa), cell(p.value), cell(p.err), cell(p.excluded)});
        slope[f.name] = s.fitted ? s.slope : std::nan("");
    }
    env.add("sigma1.slope", slope["sigma1"] >= 0.5, "k = 1 family at its critical parameters").payload = {
        Quantity::det("slope", slope["sigma1"])};
    env.add("sigma2.slope", slope["sigma2"] >= 0.5, "pair family at its critical parameters").payload = {
        Quantity::det("slope", slope["sigma2"])};
    env.add("misscaled.smaller", slope["misscaled"] < slope["sigma1"] && slope["misscaled"] < slope["sigma2"],
            "delta = d eps control family has a strictly smaller slope")
        .payload = {Quantity::det("slope", slope["misscaled"])};
    env.tables.push_back(std::move(t));
    return env;
}

// ---- energy-check ---------------------------------------------------------------

ReportEnvelope run_energy_check(const RunConfig& cfg) {
    ReportEnvelope env;
    const std::uint64_t seed = need_seed(cfg, "energy-check");
    const int N = cfg.dim;
    const DimensionParams dp = dimension_params(N);
    const BallDomain dom = cfg.domain();
    const GreenBall g(dp, dom);
    const WeightField a = cfg.weight();
    const UniversalConstants c = closed_constants(cfg);

    std::function<std::vector<SignedBubble>(double)> bubbles;
    std::function<double(double)> prediction;
    double F = 0.0;
    if (cfg.family == "pair") {
        const ConfigPair cp = resolve_pair(cfg, c);
        const F2Data f = f2_data(N, c, anchor_data(dom, a, cp.zeta0), cfg.log_variant);
        F = f2_eval(f, {cp.d1, cp.d2, cp.t1, cp.t2});
        bubbles = [=](double e) { return bubbles_of(dom, cp, e, delta_exponent(N)); };
        prediction = [=](double e) { return expansion_prediction_pair(f, c, cp, e); };
    } else {
        const ConfigK ck = resolve_single(cfg, c);
        F = f1_eval(dom, ck, a, c);
        bubbles = [=](double e) { return bubbles_of(dom, ck, e, delta_exponent(N)); };
        prediction = [=](double e) { return expansion_prediction_k(dom, ck, a, c, e); };
    }

    Table t{"energy", {"epsilon", "J", "stderr", "prediction", "residual_over_eps", "coefficient", "F"}, {}};
    std::vector<double> res, res_err;
    double coeff = 0.0, coeff_err = 0.0;
    std::uint64_t tag = 0;
    for (double eps : cfg.epsilon) {
        const EnergyEstimate J = energy_numeric(g, a, bubbles(eps), eps, cfg.samples, subseed(seed, ++tag));
        const double pred = prediction(eps);
        const double lead = pred - eps * F;
        res.push_back(std::abs(J.J.value - pred) / eps);
        res_err.push_back(J.J.err / eps);
        coeff = (J.J.value - lead) / eps;
        coeff_err = J.J.err / eps;
        t.rows.push_back({cell(eps), cell(J.J.value), cell(J.J.err), cell(pred), cell(res.back()), cell(coeff), cell(F)});
    }
    bool mono = true;
    for (std::size_t i = 1; i < res.size(); ++i) mono = mono && res[i] <= res[i - 1] + 2.0 * (res_err[i] + res_err[i - 1]);
    env.add("residual.monotone", mono, "|J - prediction|/eps decreasing along the grid within error bars").payload = {
        Quantity::est("last_residual_over_eps", res.back(), res_err.back())};
    env.add("coefficient", std::abs(coeff / F - 1.0) <= 0.2, "eps coefficient within 20% of F at the smallest eps")
        .payload = {Quantity::est("coefficient", coeff, coeff_err), Quantity::det("F", F)};
    env.tables.push_back(std::move(t));
    return env;
}

const std::map<std::string, std::function<ReportEnvelope(const RunConfig&)>>& registry() {
    static const std::map<std::string, std::function<ReportEnvelope(const RunConfig&)>> r = {
        {"constants", run_constants},
        {"bubble-check", run_bubble_check},
        {"green-check", run_green_check},
        {"projection-scan", run_projection_scan},
        {"asymptotics", run_asymptotics},
        {"critical-points", run_critical_points},
        {"residual-scan", run_residual_scan},
        {"energy-check", run_energy_check},
    };
    return r;
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names = {"constants",   "bubble-check",    "green-check",   "projection-scan",
                                                   "asymptotics", "critical-points", "residual-scan", "energy-check"};
    return names;
}

ConfigPair resolve_pair(const RunConfig& cfg, const UniversalConstants& c) {
    const BallDomain dom = cfg.domain();
    ConfigPair cp;
    cp.zeta0 = cfg.anchor();
    if (cfg.sigma.solve || cfg.family != "pair") {
        const F2Data f = f2_data(cfg.dim, c, anchor_data(dom, cfg.weight(), cp.zeta0), cfg.log_variant);
        const CriticalPointReport r = f2_minimize(f);
        if (!r.converged) throw Error(ErrorCode::no_minimum, "F2 minimization did not converge: " + r.message);
        cp.d1 = r.location[0];
        cp.d2 = r.location[1];
        cp.t1 = r.location[2];
        cp.t2 = r.location[3];
    } else {
        cp.d1 = cfg.sigma.d[0];
        cp.d2 = cfg.sigma.d[1];
        cp.t1 = cfg.sigma.t[0];
        cp.t2 = cfg.sigma.t[1];
    }
    cp.validate(dom);
    return cp;
}

ConfigK resolve_single(const RunConfig& cfg, const UniversalConstants& c) {
    const BallDomain dom = cfg.domain();
    const WeightField a = cfg.weight();
    ConfigK k;
    k.anchors = cfg.anchor_list();
    for (std::size_t i = 0; i < k.anchors.size(); ++i) {
        k.b.push_back(cfg.signs.empty() ? 0 : cfg.signs[i]);
        if (cfg.sigma.solve || cfg.family != "single") {
            const CriticalPointReport r = f1_critical(cfg.dim, c, anchor_data(dom, a, k.anchors[i]));
            k.d.push_back(r.location[0]);
            k.t.push_back(r.location[1]);
        } else {
            k.d.push_back(cfg.sigma.d[i]);
            k.t.push_back(cfg.sigma.t[i]);
        }
    }
    k.validate(dom);
    return k;
}

ReportEnvelope run_subcommand(const std::string& name, const RunConfig& cfg) {
    const auto& r = registry();
    const auto it = r.find(name);
    if (it == r.end()) {
        std::string list;
        for (const auto& n : subcommand_names()) list += (list.empty() ? "" : ", ") + n;
        throw Error(ErrorCode::unknown_subcommand, "'" + name + "'; valid subcommands: " + list);
    }
    cfg.validate();
    ReportEnvelope env;
    try {
        env = it->second(cfg);
    } catch (const Error& e) {
        throw Error(e.code(), name + ": " + e.detail());
    }
    env.subcommand = name;
    env.config = config_json(cfg);
    return env;
}

}  // namespace blowup
