// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#include "estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "constants.hpp"
#include "decoherence.hpp"
#include "errors.hpp"
#include "numerics.hpp"

namespace fluxdec {

namespace {

double lerp_at(std::span<const double> x, std::span<const double> y, double xq) {
    auto it = std::upper_bound(x.begin(), x.end(), xq);
    std::size_t i = static_cast<std::size_t>(it - x.begin());
    if (i == 0) i = 1;
    if (i >= x.size()) i = x.size() - 1;
    const double t = (xq - x[i - 1]) / (x[i] - x[i - 1]);
    return y[i - 1] + t * (y[i] - y[i - 1]);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) {
        // trim surrounding whitespace
        const auto b = field.find_first_not_of(" \t\r");
        const auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_double_field(const std::string& s, const char* column, int row) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        std::ostringstream os;
        os << "row " << row << ": cannot parse column '" << column << "' value '" << s << "'";
        throw DataError(os.str());
    }
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream is(text);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (first) {
            t.header = std::move(fields);
            first = false;
        } else {
            t.rows.push_back(std::move(fields));
        }
    }
    if (first) throw DataError("empty dataset");
    return t;
}

int column_index(const CsvTable& t, const char* name) {
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (t.header[i] == name) return static_cast<int>(i);
    }
    throw DataError(std::string("missing column '") + name + "'");
}

}  // namespace

double extract_symmetry_point(std::span<const double> phi, std::span<const double> y) {
    const std::size_t n = phi.size();
    if (n < 8 || y.size() != n) throw std::domain_error("trace too short");
    const double lo = phi.front();
    const double hi = phi.back();
    const double pitch = (hi - lo) / double(n - 1);

    // Mean-square mismatch between the trace and its mirror about c,
    // averaged over the overlap window.
    const auto mismatch = [&](double c) {
        const double w = std::min(c - lo, hi - c);
        const int m = 64;
        double acc = 0.0;
        for (int i = 1; i <= m; ++i) {
            const double u = w * i / m;
            const double dv = lerp_at(phi, y, c + u) - lerp_at(phi, y, c - u);
            acc += dv * dv;
        }
        return acc / m;
    };

    const double margin = 2.0 * pitch;
    const double a = lo + margin;
    const double b = hi - margin;
    if (!(b > a)) throw std::domain_error("trace too short");

    const int coarse = 512;
    double best_c = a;
    double best_m = std::numeric_limits<double>::infinity();
    double worst_m = 0.0;
    for (int i = 0; i <= coarse; ++i) {
        const double c = a + (b - a) * i / coarse;
        const double m = mismatch(c);
        worst_m = std::max(worst_m, m);
        if (m < best_m) {
            best_m = m;
            best_c = c;
        }
    }
    if (!(worst_m > 0.0) || best_m > (1.0 - 1e-9) * worst_m) {
        throw std::domain_error("no reflection-symmetry center in the trace");
    }
    const double step = (b - a) / coarse;
    if (best_c - step <= a || best_c + step >= b) {
        throw std::domain_error("no interior reflection-symmetry center");
    }
    return golden_min(mismatch, best_c - step, best_c + step, 1e-12 * (hi - lo));
}

AsymmetryFit fit_asymmetry(const std::vector<SymmetryRow>& data) {
    if (data.size() < 3) throw DataError("asymmetry fit needs at least 3 rows");
    for (const auto& r : data) {
        if (!(std::abs(r.phi_x) < 0.5)) {
            throw DataError("asymmetry fit requires |phi_x| < 0.5");
        }
    }
    const bool weighted = std::all_of(data.begin(), data.end(),
                                      [](const SymmetryRow& r) { return r.sigma > 0.0; });
    AsymmetryFit fit;
    fit.n_rows = static_cast<int>(data.size());
    double d = 0.0;
    double jtj = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
        jtj = 0.0;
        double jtr = 0.0;
        for (const auto& r : data) {
            const double w = weighted ? 1.0 / (r.sigma * r.sigma) : 1.0;
            const double t = std::tan(kPi * r.phi_x);
            const double model = 0.5 + std::atan(d * t) / kTwoPi;
            const double jac = t / (kTwoPi * (1.0 + d * d * t * t));
            jtj += w * jac * jac;
            jtr += w * jac * (r.phi_z_sym - model);
        }
        if (!(jtj > 0.0)) throw ConvergenceError("asymmetry fit: degenerate design");
        const double step = jtr / jtj;
        d += step;
        fit.iterations = iter + 1;
        if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(d))) break;
        if (iter == 99) throw ConvergenceError("asymmetry fit did not converge");
    }
    fit.d = d;
    fit.chi2 = 0.0;
    for (const auto& r : data) {
        const double w = weighted ? 1.0 / (r.sigma * r.sigma) : 1.0;
        const double model = 0.5 + std::atan(d * std::tan(kPi * r.phi_x)) / kTwoPi;
        fit.chi2 += w * (r.phi_z_sym - model) * (r.phi_z_sym - model);
    }
    double var = 1.0 / jtj;
    if (!weighted && data.size() > 1) {
        var *= fit.chi2 / (data.size() - 1);
    }
    fit.std_error = std::sqrt(var);
    return fit;
}

double predict_tphi(const QubitPoint& point, double a_z, double a_x, double c_zx,
                    Protocol protocol, const DephasingModelParams& params,
                    double eta0, double eta1) {
    const double gz = point.d_omega_d_phi_z;
    const double gx = point.d_omega_d_phi_x;
    const double a_w = gz * gz * a_z + gx * gx * a_x +
                       2.0 * gz * gx * c_zx * std::sqrt(a_z * a_x);
    const double eta = protocol == Protocol::ramsey ? eta0 : eta1;
    const auto t = tphi_closed_form(std::max(a_w, 0.0), eta, params.alpha);
    return t ? *t : std::numeric_limits<double>::infinity();
}

NoiseFit fit_flux_noise(const std::vector<CoherenceRow>& data, const QubitCurves& curves,
                        const DephasingModelParams& params) {
    if (data.size() < 4) throw DataError("flux-noise fit needs at least 4 rows");
    std::set<long long> distinct;
    for (const auto& r : data) {
        if (!(r.t_phi > 0.0)) throw DataError("t_phi values must be positive");
        distinct.insert(std::llround(r.phi_x * 1e9));
    }
    if (distinct.size() < 2) {
        throw DataError("flux-noise fit needs >= 2 distinct phi_x values");
    }
    const bool weighted = std::all_of(data.begin(), data.end(),
                                      [](const CoherenceRow& r) { return r.sigma_t > 0.0; });

    const double eta0 = eta_factor(0, params.alpha, params.omega_low, params.t_typ);
    const double eta1 = eta_factor(1, params.alpha, params.omega_low, params.t_typ);

    std::vector<QubitPoint> points;
    points.reserve(data.size());
    for (const auto& r : data) {
        points.push_back(compute_point(curves, FluxBias{r.phi_z, r.phi_x}));
    }

    const std::size_t n = data.size();
    // Parameters: p = (sqrt(A_z), sqrt(A_x), atanh-space correlation).
    std::array<double, 3> p = {1e-5, 1e-5, 0.0};

    const auto residuals = [&](const std::array<double, 3>& q, std::vector<double>& r_out) {
        const double az = q[0] * q[0];
        const double ax = q[1] * q[1];
        const double c = std::tanh(q[2]);
        for (std::size_t i = 0; i < n; ++i) {
            const double pred = predict_tphi(points[i], az, ax, c, data[i].protocol,
                                             params, eta0, eta1);
            const double w = weighted ? 1.0 / data[i].sigma_t : 1.0;
            r_out[i] = (pred - data[i].t_phi) * w;
        }
    };

    std::vector<double> r(n), r_try(n);
    std::vector<std::array<double, 3>> jac(n);
    residuals(p, r);
    double chi2 = 0.0;
    for (double v : r) chi2 += v * v;

    double lambda = 1e-3;
    int iter = 0;
    bool converged = false;
    std::array<std::array<double, 3>, 3> jtj{};
    for (; iter < 200; ++iter) {
        // Numeric Jacobian, forward differences.
        for (int k = 0; k < 3; ++k) {
            auto q = p;
            const double h = 1e-6 * std::max(std::abs(p[k]), 1e-7);
            q[k] += h;
            residuals(q, r_try);
            for (std::size_t i = 0; i < n; ++i) jac[i][k] = (r_try[i] - r[i]) / h;
        }
        std::array<double, 3> jtr{};
        for (auto& row : jtj) row.fill(0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (int a = 0; a < 3; ++a) {
                jtr[a] += jac[i][a] * r[i];
                for (int b = 0; b < 3; ++b) jtj[a][b] += jac[i][a] * jac[i][b];
            }
        }
        // Flat direction means the dataset cannot identify all three parameters.
        {
            double m[9], rhs[3] = {0, 0, 0};
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) m[a * 3 + b] = jtj[a][b];
            double probe[9];
            std::copy(m, m + 9, probe);
            if (!solve_dense(3, probe, rhs, 1e-12)) {
                throw ConvergenceError(
                    "flux-noise fit: flat Hessian direction, parameters unidentifiable");
            }
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
            double m[9];
            double step[3];
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) m[a * 3 + b] = jtj[a][b];
                m[a * 3 + a] *= (1.0 + lambda);
                step[a] = -jtr[a];
            }
            if (!solve_dense(3, m, step)) {
                lambda *= 10.0;
                continue;
            }
            std::array<double, 3> q = {p[0] + step[0], p[1] + step[1], p[2] + step[2]};
            residuals(q, r_try);
            double chi2_try = 0.0;
            for (double v : r_try) chi2_try += v * v;
            if (chi2_try < chi2) {
                p = q;
                r.swap(r_try);
                const double drop = chi2 - chi2_try;
                chi2 = chi2_try;
                lambda = std::max(lambda * 0.3, 1e-12);
                accepted = true;
                if (drop < 1e-12 * std::max(chi2, 1e-300)) converged = true;
            } else {
                lambda *= 10.0;
            }
        }
        if (!accepted) {
            converged = chi2 < std::numeric_limits<double>::infinity();
            break;  // no downhill step left at any damping: stationary point
        }
        if (converged) break;
    }
    if (!converged && iter >= 200) {
        throw ConvergenceError("flux-noise fit did not converge");
    }

    NoiseFit fit;
    fit.sqrt_a_z = std::abs(p[0]);
    fit.sqrt_a_x = std::abs(p[1]);
    const double sign = (p[0] * p[1]) < 0.0 ? -1.0 : 1.0;
    fit.c_zx = sign * std::tanh(p[2]);
    fit.chi2 = chi2;
    fit.n_rows = static_cast<int>(n);
    fit.iterations = iter;
    const int dof = static_cast<int>(n) - 3;
    fit.chi2_reduced = dof > 0 ? chi2 / dof : 0.0;

    // Covariance of p from (J^T J)^-1, mapped to (sqrt_a_z, sqrt_a_x, c_zx)
    // by the diagonal Jacobian of the reparameterization.
    double m[9];
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) m[a * 3 + b] = jtj[a][b];
    std::array<std::array<double, 3>, 3> cov{};
    for (int col = 0; col < 3; ++col) {
        double mm[9];
        std::copy(m, m + 9, mm);
        double e[3] = {0, 0, 0};
        e[col] = 1.0;
        if (!solve_dense(3, mm, e)) {
            throw ConvergenceError("flux-noise fit: singular normal equations");
        }
        for (int row = 0; row < 3; ++row) cov[row][col] = e[row];
    }
    const double scale = weighted ? 1.0 : (dof > 0 ? chi2 / dof : 1.0);
    const double sech2 = 1.0 - std::tanh(p[2]) * std::tanh(p[2]);
    const std::array<double, 3> dmap = {1.0, 1.0, sech2};
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            fit.covariance[a][b] = cov[a][b] * dmap[a] * dmap[b] * scale;
        }
        fit.std_errors[a] = std::sqrt(std::max(fit.covariance[a][a], 0.0));
    }
    return fit;
}

std::vector<CoherenceRow> parse_coherence_csv(const std::string& text) {
    const CsvTable t = parse_csv(text);
    const int c_pz = column_index(t, "phi_z");
    const int c_px = column_index(t, "phi_x");
    const int c_t = column_index(t, "t_phi_s");
    const int c_s = column_index(t, "sigma_s");
    const int c_p = column_index(t, "protocol");
    std::vector<CoherenceRow> rows;
    int line = 1;
    for (const auto& f : t.rows) {
        ++line;
        if (f.size() != t.header.size()) {
            std::ostringstream os;
            os << "row " << line << ": expected " << t.header.size() << " fields, got "
               << f.size();
            throw DataError(os.str());
        }
        CoherenceRow r;
        r.phi_z = parse_double_field(f[c_pz], "phi_z", line);
        r.phi_x = parse_double_field(f[c_px], "phi_x", line);
        r.t_phi = parse_double_field(f[c_t], "t_phi_s", line);
        r.sigma_t = f[c_s].empty() ? 0.0 : parse_double_field(f[c_s], "sigma_s", line);
        if (f[c_p] == "ramsey") r.protocol = Protocol::ramsey;
        else if (f[c_p] == "echo") r.protocol = Protocol::echo;
        else {
            std::ostringstream os;
            os << "row " << line << ": protocol must be 'ramsey' or 'echo', got '"
               << f[c_p] << "'";
            throw DataError(os.str());
        }
        rows.push_back(r);
    }
    if (rows.empty()) throw DataError("dataset has a header but no rows");
    return rows;
}

std::vector<SymmetryRow> parse_symmetry_csv(const std::string& text) {
    const CsvTable t = parse_csv(text);
    const int c_px = column_index(t, "phi_x");
    const int c_sym = column_index(t, "phi_z_sym");
    const int c_s = column_index(t, "sigma");
    std::vector<SymmetryRow> rows;
    int line = 1;
    for (const auto& f : t.rows) {
        ++line;
        if (f.size() != t.header.size()) {
            std::ostringstream os;
            os << "row " << line << ": expected " << t.header.size() << " fields, got "
               << f.size();
            throw DataError(os.str());
        }
        SymmetryRow r;
        r.phi_x = parse_double_field(f[c_px], "phi_x", line);
        r.phi_z_sym = parse_double_field(f[c_sym], "phi_z_sym", line);
        r.sigma = f[c_s].empty() ? 0.0 : parse_double_field(f[c_s], "sigma", line);
        rows.push_back(r);
    }
    if (rows.empty()) throw DataError("dataset has a header but no rows");
    return rows;
}

}  // namespace fluxdec
