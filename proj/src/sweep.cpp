#include "nullcone/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <exception>
#include <limits>

#include <Eigen/Eigenvalues>

#include "nullcone/curvature.hpp"
#include "nullcone/propagators.hpp"

namespace nullcone::sweep {

namespace {

double parse_double(const std::string& s, const std::string& whole) {
    double v = 0.0;
    const auto* b = s.data();
    const auto* e = s.data() + s.size();
    const auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc() || r.ptr != e) throw ConfigError("bad number '" + s + "' in grid '" + whole + "'");
    return v;
}

std::vector<std::string> coord_names(int n) {
    std::vector<std::string> h = {"t", "chi"};
    for (int i = 1; i <= n - 2; ++i) h.push_back("theta" + std::to_string(i));
    return h;
}

}  // namespace

GridSpec GridSpec::parse(const std::string& text) {
    const auto p1 = text.find(':');
    const auto p2 = p1 == std::string::npos ? std::string::npos : text.find(':', p1 + 1);
    if (p2 == std::string::npos || text.find(':', p2 + 1) != std::string::npos)
        throw ConfigError("grid '" + text + "' must be start:stop:count");
    GridSpec g;
    g.start = parse_double(text.substr(0, p1), text);
    g.stop = parse_double(text.substr(p1 + 1, p2 - p1 - 1), text);
    const std::string c = text.substr(p2 + 1);
    const auto r = std::from_chars(c.data(), c.data() + c.size(), g.count);
    if (r.ec != std::errc() || r.ptr != c.data() + c.size() || g.count < 1)
        throw ConfigError("grid '" + text + "' needs a positive integer count");
    return g;
}

std::vector<double> GridSpec::values() const {
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) v[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
    return v;
}

void run_indexed(std::size_t count, const std::function<void(std::size_t)>& fn, Exec exec) {
    std::vector<std::exception_ptr> errs(count);
    auto guarded = [&](std::size_t i) {
        try {
            fn(i);
        } catch (...) {
            errs[i] = std::current_exception();
        }
    };
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < count; ++i) guarded(i);
    } else {
        const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < n; ++i) guarded(static_cast<std::size_t>(i));
    }
    for (std::size_t i = 0; i < count; ++i) {
        if (!errs[i]) continue;
        try {
            std::rethrow_exception(errs[i]);
        } catch (const DomainError& e) {
            throw GridFailure(i, e.what());
        } catch (const StepFailure& e) {
            throw GridFailure(i, e.what());
        }
    }
}

std::vector<ChartPoint> chart_grid(int k, const GridSpec& t, const GridSpec& chi,
                                   const std::vector<GridSpec>& angles) {
    std::vector<std::vector<double>> axes = {t.values(), chi.values()};
    for (const auto& g : angles) axes.push_back(g.values());
    std::vector<ChartPoint> out;
    std::vector<std::size_t> idx(axes.size(), 0);
    for (;;) {
        std::vector<double> ang;
        for (std::size_t j = 2; j < axes.size(); ++j) ang.push_back(axes[j][idx[j]]);
        out.push_back(embedding::make_chart_point(k, axes[0][idx[0]], axes[1][idx[1]], ang));
        std::size_t j = axes.size();
        while (j > 0) {
            --j;
            if (++idx[j] < axes[j].size()) break;
            idx[j] = 0;
            if (j == 0) return out;
        }
    }
}

Table embed_table(int k, const ScaleExpr& a, const std::vector<ChartPoint>& pts, Exec exec) {
    const int n = pts.empty() ? 4 : pts.front().n();
    Table tab;
    tab.header = coord_names(n);
    for (int al = 0; al < n + 2; ++al) tab.header.push_back("y" + std::to_string(al));
    tab.header.push_back("c");
    tab.header.push_back("f");
    tab.rows.resize(pts.size());
    const auto f = embedding::flrw(k, a, n);
    run_indexed(
        pts.size(),
        [&](std::size_t i) {
            const Eigen::VectorXd y = embedding::embed_point(k, a, pts[i]);
            auto row = pts[i].coords();
            row.insert(row.end(), y.data(), y.data() + y.size());
            row.push_back(embedding::cone_c(y));
            row.push_back(f(y));
            tab.rows[i] = std::move(row);
        },
        exec);
    return tab;
}

Table metric_table(int k, const ScaleExpr& a, const std::vector<ChartPoint>& pts, Exec exec) {
    const int n = pts.empty() ? 4 : pts.front().n();
    Table tab;
    tab.header = coord_names(n);
    for (int m = 0; m < n; ++m)
        for (int v = m; v < n; ++v) tab.header.push_back("g" + std::to_string(m) + std::to_string(v));
    tab.header.push_back("closed_form_residual");
    tab.rows.resize(pts.size());
    run_indexed(
        pts.size(),
        [&](std::size_t i) {
            const Eigen::MatrixXd g = embedding::induced_metric(k, a, pts[i]);
            const auto x = pts[i].coords();
            const Eigen::MatrixXd c = embedding::flrw_closed_metric(k, a, x);
            auto row = x;
            for (int m = 0; m < n; ++m)
                for (int v = m; v < n; ++v) row.push_back(g(m, v));
            row.push_back((g - c).cwiseAbs().maxCoeff() / std::max(1.0, c.cwiseAbs().maxCoeff()));
            tab.rows[i] = std::move(row);
        },
        exec);
    return tab;
}

Table curvature_table(int k, const ScaleExpr& a, const std::vector<ChartPoint>& pts, Exec exec,
                      const intrinsic::FdOptions& opt) {
    const int n = pts.empty() ? 4 : pts.front().n();
    Table tab;
    tab.header = coord_names(n);
    tab.header.push_back("R");
    for (int m = 0; m < n; ++m) tab.header.push_back("ricci_eig" + std::to_string(m));
    tab.header.push_back("oracle_residual");
    tab.rows.resize(pts.size());
    run_indexed(
        pts.size(),
        [&](std::size_t i) {
            const auto amb = curvature::ambient_curvature(k, a, pts[i]);
            const auto ora = curvature::intrinsic_curvature_oracle(k, a, pts[i], opt);
            auto row = pts[i].coords();
            row.push_back(amb.scalar);
            const Eigen::MatrixXd mixed = amb.metric.inverse() * amb.ricci;
            const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(mixed, false).eigenvalues();
            std::vector<double> re(ev.size());
            for (int m = 0; m < ev.size(); ++m) re[m] = ev[m].real();
            std::sort(re.begin(), re.end());
            row.insert(row.end(), re.begin(), re.end());
            row.push_back((amb.riemann - ora.riemann).max_abs() / std::max(1.0, ora.riemann.max_abs()));
            tab.rows[i] = std::move(row);
        },
        exec);
    return tab;
}

Table propagator_table(int k, const ScaleExpr& a, const std::vector<ChartPoint>& pts, const ChartPoint& ref,
                       const PropagatorColumns& cols, Exec exec) {
    if (ref.n() != 4) throw DomainError("propagator grids need n = 4");
    Table tab;
    tab.header = coord_names(4);
    tab.header.push_back("ydot");
    tab.header.push_back("scalar");
    if (cols.potential)
        for (int m = 0; m < 4; ++m)
            for (int v = 0; v < 4; ++v) tab.header.push_back("aa_" + std::to_string(m) + std::to_string(v));
    if (cols.field)
        for (const auto& p : propagators::kPairs)
            for (const auto& q : propagators::kPairs)
                tab.header.push_back("ff_" + std::to_string(p[0]) + std::to_string(p[1]) + "_" +
                                     std::to_string(q[0]) + std::to_string(q[1]));
    const propagators::Point xp = propagators::from_chart(k, ref);
    tab.rows.resize(pts.size());
    run_indexed(
        pts.size(),
        [&](std::size_t i) {
            const propagators::Point x = propagators::from_chart(k, pts[i]);
            auto row = pts[i].coords();
            const auto sep = propagators::ambient_dot(k, a, x, xp);
            row.push_back(sep.ydot);
            row.push_back(propagators::scalar_two_point(k, a, x, xp));
            if (cols.potential) {
                const auto M = propagators::photon_potential_ambient(k, a, x, xp);
                for (int m = 0; m < 4; ++m)
                    for (int v = 0; v < 4; ++v) row.push_back(M(m, v));
            }
            if (cols.field) {
                propagators::BiTensor2 F;
                switch (cols.route) {
                    case PropagatorColumns::FieldRoute::closed:
                        F = propagators::field_strength_two_point(k, x, xp);
                        break;
                    case PropagatorColumns::FieldRoute::ambient:
                        F = propagators::field_strength_ambient(k, a, x, xp);
                        break;
                    case PropagatorColumns::FieldRoute::dd:
                        F = propagators::field_strength_via_dd(k, a, x, xp);
                        break;
                }
                for (int p = 0; p < 6; ++p)
                    for (int q = 0; q < 6; ++q) row.push_back(F(p, q));
            }
            tab.rows[i] = std::move(row);
        },
        exec);
    return tab;
}

}  // namespace nullcone::sweep
