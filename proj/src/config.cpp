// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "constants.hpp"
#include "errors.hpp"

namespace fluxdec {

using nlohmann::json;

namespace {

// Section reader with unknown-key rejection and path-anchored messages.
class Section {
  public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            throw ConfigError("config error at " + path_ + ": expected an object");
        }
    }
    ~Section() = default;

    void finish() const {
        for (auto it = node_.begin(); it != node_.end(); ++it) {
            if (seen_.find(it.key()) == seen_.end()) {
                throw ConfigError("config error at " + path_ + ": unknown key '" +
                                  it.key() + "'");
            }
        }
    }

    bool has(const std::string& key) const {
        seen_.insert(key);
        auto it = node_.find(key);
        return it != node_.end() && !it->is_null();
    }

    const json& raw(const std::string& key) const {
        seen_.insert(key);
        auto it = node_.find(key);
        if (it == node_.end()) {
            throw ConfigError("config error at " + path_ + ": missing key '" + key + "'");
        }
        return *it;
    }

    Section object(const std::string& key) const {
        return Section(raw(key), path_ + "/" + key);
    }
    bool has_object(const std::string& key) const { return has(key); }

    double number(const std::string& key) const {
        const json& v = raw(key);
        if (!v.is_number()) {
            throw ConfigError("config error at " + path_ + "/" + key +
                              ": expected a number");
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            throw ConfigError("config error at " + path_ + "/" + key + ": not finite");
        }
        return d;
    }
    double number(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }
    double positive(const std::string& key) const {
        const double v = number(key);
        if (!(v > 0.0)) {
            throw ConfigError("config error at " + path_ + "/" + key +
                              ": must be > 0");
        }
        return v;
    }
    double non_negative(const std::string& key, double fallback) const {
        if (!has(key)) return fallback;
        const double v = number(key);
        if (!(v >= 0.0)) {
            throw ConfigError("config error at " + path_ + "/" + key +
                              ": must be >= 0");
        }
        return v;
    }
    double in_range(const std::string& key, double lo, double hi) const {
        const double v = number(key);
        if (!(v >= lo && v <= hi)) {
            std::ostringstream os;
            os << "config error at " << path_ << "/" << key << ": expected value in ["
               << lo << ", " << hi << "]";
            throw ConfigError(os.str());
        }
        return v;
    }
    int integer(const std::string& key, int fallback) const {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number_integer()) {
            throw ConfigError("config error at " + path_ + "/" + key +
                              ": expected an integer");
        }
        return v.get<int>();
    }
    bool boolean(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) {
            throw ConfigError("config error at " + path_ + "/" + key +
                              ": expected true or false");
        }
        return v.get<bool>();
    }
    std::string text(const std::string& key) const {
        const json& v = raw(key);
        if (!v.is_string()) {
            throw ConfigError("config error at " + path_ + "/" + key +
                              ": expected a string");
        }
        return v.get<std::string>();
    }
    std::vector<double> number_array(const std::string& key) const {
        const json& v = raw(key);
        if (!v.is_array()) {
            throw ConfigError("config error at " + path_ + "/" + key +
                              ": expected an array of numbers");
        }
        std::vector<double> out;
        out.reserve(v.size());
        for (const auto& e : v) {
            if (!e.is_number()) {
                throw ConfigError("config error at " + path_ + "/" + key +
                                  ": expected an array of numbers");
            }
            out.push_back(e.get<double>());
        }
        return out;
    }

    const json& node() const { return node_; }
    const std::string& path() const { return path_; }

  private:
    const json& node_;
    std::string path_;
    mutable std::set<std::string> seen_;
};

OneOverF read_one_over_f(const Section& s) {
    OneOverF m;
    const double amp_rt = s.number("amp_phi0_per_rthz");
    if (!(amp_rt >= 0.0)) {
        throw ConfigError("config error at " + s.path() +
                          "/amp_phi0_per_rthz: must be >= 0");
    }
    m.amp = amp_rt * amp_rt;
    m.alpha = s.in_range("alpha", 0.5, 1.5);
    s.finish();
    return m;
}

AttenuationChain read_chain(const Section& s) {
    AttenuationChain chain;
    chain.source_temperature = s.positive("source_t_k");
    const json& arr = s.raw("chain");
    if (!arr.is_array() || arr.empty()) {
        throw ConfigError("config error at " + s.path() +
                          "/chain: expected a non-empty array of stages");
    }
    int idx = 0;
    for (const auto& e : arr) {
        Section stage(e, s.path() + "/chain[" + std::to_string(idx++) + "]");
        AttenuationStage st;
        st.temperature = stage.positive("t_k");
        st.atten_db = stage.non_negative("atten_db", 0.0);
        stage.finish();
        chain.stages.push_back(st);
    }
    return chain;
}

BiasLineJN read_biasline(const Section& s) {
    BiasLineJN line;
    line.z0 = s.positive("z0_ohm");
    line.inductance = s.positive("lb_ph") * 1e-12;
    if (s.has("noise_t_k")) {
        line.fixed_noise_temperature = s.positive("noise_t_k");
        s.finish();
    } else {
        line.chain = read_chain(s);
        s.finish();
    }
    return line;
}

FilteredSource read_source(const Section& s) {
    FilteredSource src;
    const double av = s.number("av_v_rthz");
    if (!(av >= 0.0)) {
        throw ConfigError("config error at " + s.path() + "/av_v_rthz: must be >= 0");
    }
    src.amp_1f = av * av;
    src.white = s.non_negative("sv0_v2_hz", 0.0);
    src.cutoff = s.positive("lpf_hz") * kTwoPi;
    s.finish();
    return src;
}

Ohmic read_ohmic(const Section& s, const char* coeff_key) {
    Ohmic m;
    m.coeff = s.non_negative(coeff_key, 0.0);
    m.gamma = s.number("gamma", 1.0);
    m.temperature = s.positive("t_k");
    s.finish();
    return m;
}

}  // namespace

json parse_config_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
}

json parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config_text(os.str());
}

void apply_override(json& config, const std::string& dotted_path,
                    const std::string& value_json) {
    if (dotted_path.empty()) throw ConfigError("empty override path");
    json value;
    try {
        value = json::parse(value_json);
    } catch (const json::parse_error&) {
        // Bare words are treated as strings, so --set sweep.axis=phi_x works.
        value = value_json;
    }
    json* node = &config;
    std::size_t start = 0;
    for (;;) {
        const std::size_t dot = dotted_path.find('.', start);
        const std::string key = dotted_path.substr(
            start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError("bad override path '" + dotted_path + "'");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        if (!node->contains(key) || !(*node)[key].is_object()) {
            (*node)[key] = json::object();
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

Model build_model(const json& config) {
    Section root(config, "");

    // --- device -----------------------------------------------------------
    Section device = root.object("device");
    Section curves_sec = device.object("curves");
    const auto phi_x = curves_sec.number_array("phi_x");
    const auto ip = curves_sec.number_array("ip_amps");
    auto delta_hz = curves_sec.number_array("delta_hz");
    const double d = curves_sec.in_range("asymmetry_d", -0.999999, 0.999999);
    curves_sec.finish();
    device.finish();
    if (phi_x.size() != ip.size() || phi_x.size() != delta_hz.size()) {
        throw ConfigError("config error at /device/curves: arrays must have equal length");
    }
    if (phi_x.size() < 4) {
        throw ConfigError("config error at /device/curves: need at least 4 samples");
    }
    for (double& v : delta_hz) v *= kTwoPi;  // plain Hz in config, rad/s inside
    Model model(QubitCurves(phi_x, ip, delta_hz, d));

    // --- resonator / squid -------------------------------------------------
    Section res = root.object("resonator");
    model.resonator.omega_r = res.positive("omega_r_hz") * kTwoPi;
    model.resonator.kappa = res.positive("kappa_hz") * kTwoPi;
    model.resonator.z0 = res.positive("z0_ohm");
    model.resonator.vph = res.positive("vph_m_s");
    model.resonator.length = res.positive("length_m");
    model.resonator.m_qr = res.number("mqr_ph") * 1e-12;
    res.finish();

    Section squid = root.object("squid");
    model.squid.ic = squid.positive("ic_ua") * 1e-6;
    model.squid.lg = squid.positive("lg_ph") * 1e-12;
    model.squid.phi_r = squid.number("phi_r", 0.0);
    squid.finish();

    // --- noise --------------------------------------------------------------
    Section noise = root.object("noise");
    Section intrinsic = noise.object("intrinsic");
    const OneOverF int_z = read_one_over_f(intrinsic.object("z"));
    const OneOverF int_x = read_one_over_f(intrinsic.object("x"));
    intrinsic.finish();
    model.noise.intrinsic_z = int_z;
    model.noise.intrinsic_x = int_x;
    model.a_z_1f = int_z.amp;
    model.a_x_1f = int_x.amp;
    model.noise.c_zx = noise.in_range("correlation_czx", -0.999999, 0.999999);

    if (noise.has_object("biasline")) {
        Section bl = noise.object("biasline");
        if (bl.has_object("z")) model.noise.biasline_z = read_biasline(bl.object("z"));
        if (bl.has_object("x")) model.noise.biasline_x = read_biasline(bl.object("x"));
        bl.finish();
    }
    if (noise.has_object("source")) {
        Section src = noise.object("source");
        if (src.has_object("z")) model.noise.source_z = read_source(src.object("z"));
        if (src.has_object("x")) model.noise.source_x = read_source(src.object("x"));
        src.finish();
    }
    if (noise.has_object("mutuals")) {
        Section mut = noise.object("mutuals");
        model.noise.m_zz = mut.number("mzz_ph", 0.0) * 1e-12;
        model.noise.m_zx = mut.number("mzx_ph", 0.0) * 1e-12;
        model.noise.m_xz = mut.number("mxz_ph", 0.0) * 1e-12;
        model.noise.m_xx = mut.number("mxx_ph", 0.0) * 1e-12;
        mut.finish();
    }
    model.noise.r_z = noise.number("r_z_ohm", 1.0);
    model.noise.r_x = noise.number("r_x_ohm", 1.0);
    if (!(model.noise.r_z > 0.0 && model.noise.r_x > 0.0)) {
        throw ConfigError("config error at /noise: series resistances must be > 0");
    }

    if (noise.has_object("channels")) {
        Section ch = noise.object("channels");
        auto& t = model.channels;
        t.flux_z_1f = ch.boolean("flux_z_1f", t.flux_z_1f);
        t.flux_x_1f = ch.boolean("flux_x_1f", t.flux_x_1f);
        t.biasline_z = ch.boolean("biasline_z", t.biasline_z);
        t.biasline_x = ch.boolean("biasline_x", t.biasline_x);
        t.purcell = ch.boolean("purcell", t.purcell);
        t.ohmic_flux_z = ch.boolean("ohmic_flux_z", t.ohmic_flux_z);
        t.ohmic_flux_x = ch.boolean("ohmic_flux_x", t.ohmic_flux_x);
        t.ohmic_charge = ch.boolean("ohmic_charge", t.ohmic_charge);
        t.source_z = ch.boolean("source_z", t.source_z);
        t.source_x = ch.boolean("source_x", t.source_x);
        t.critical_current = ch.boolean("critical_current", t.critical_current);
        t.shot_noise = ch.boolean("shot_noise", t.shot_noise);
        t.second_order_flux = ch.boolean("second_order_flux", t.second_order_flux);
        ch.finish();
    }
    if (noise.has_object("critical_current")) {
        Section cc = noise.object("critical_current");
        model.critical_current.a_ic = cc.non_negative("a_ic", 4e-6);
        model.critical_current.dln_delta_dln_ic = cc.number("dln_delta_dln_ic", -2.0);
        model.critical_current.dln_ip_dln_ic = cc.number("dln_ip_dln_ic", 1.0);
        cc.finish();
    }
    if (noise.has_object("shot_noise")) {
        Section sn = noise.object("shot_noise");
        model.shot_noise.chi_disp = sn.positive("chi_hz") * kTwoPi;
        model.shot_noise.nbar = sn.non_negative("nbar", 0.0);
        sn.finish();
    }
    if (noise.has_object("ohmic")) {
        Section oh = noise.object("ohmic");
        if (oh.has_object("flux_z")) model.ohmic.flux_z = read_ohmic(oh.object("flux_z"), "b");
        if (oh.has_object("flux_x")) model.ohmic.flux_x = read_ohmic(oh.object("flux_x"), "b");
        if (oh.has_object("charge")) model.ohmic.charge = read_ohmic(oh.object("charge"), "b_rate");
        oh.finish();
    }
    noise.finish();

    // Cross-field checks the pure modules rely on.
    if (model.channels.source_z && !model.noise.source_z) {
        throw ConfigError("config error: channels.source_z enabled but noise.source.z missing");
    }
    if (model.channels.source_x && !model.noise.source_x) {
        throw ConfigError("config error: channels.source_x enabled but noise.source.x missing");
    }
    if (model.channels.biasline_z && !model.noise.biasline_z) {
        throw ConfigError("config error: channels.biasline_z enabled but noise.biasline.z missing");
    }
    if (model.channels.biasline_x && !model.noise.biasline_x) {
        throw ConfigError("config error: channels.biasline_x enabled but noise.biasline.x missing");
    }
    if (model.channels.shot_noise && !(model.shot_noise.chi_disp > 0.0)) {
        throw ConfigError("config error: channels.shot_noise enabled but noise.shot_noise.chi_hz missing");
    }

    // --- geometry (optional, prediction path only) --------------------------
    if (root.has_object("geometry")) {
        Section geo = root.object("geometry");
        LoopGeometry g;
        g.b_coeff = geo.non_negative("b_coeff", 0.0);
        const json& arr = geo.raw("arms");
        if (!arr.is_array()) {
            throw ConfigError("config error at /geometry/arms: expected an array");
        }
        int idx = 0;
        for (const auto& e : arr) {
            Section arm(e, "/geometry/arms[" + std::to_string(idx++) + "]");
            LoopArm a;
            a.name = arm.text("name");
            a.length = arm.positive("l_um");
            a.width = arm.positive("w_um");
            arm.finish();
            g.arms.push_back(std::move(a));
        }
        geo.finish();
        geometry_model(g);  // rejects incomplete arm sets up front
        model.geometry = std::move(g);
    }

    // --- dephasing conventions ----------------------------------------------
    if (root.has_object("dephasing")) {
        Section dep = root.object("dephasing");
        model.dephasing.omega_low = dep.positive("omega_low_hz") * kTwoPi;
        model.dephasing.t_typ = dep.positive("t_typ_s");
        model.dephasing.alpha = dep.has("alpha") ? dep.in_range("alpha", 0.5, 1.5) : 1.0;
        dep.finish();
    } else {
        model.dephasing.omega_low = kTwoPi * 10.0;
        model.dephasing.t_typ = 1e-7;
        model.dephasing.alpha = 1.0;
    }

    // --- bias ----------------------------------------------------------------
    Section bias = root.object("bias");
    model.bias.phi_x = bias.number("phi_x");
    if (bias.has("phi_z")) model.bias.phi_z = bias.number("phi_z");
    model.bias.phi_z_offset = bias.number("phi_z_offset", 0.0);
    bias.finish();
    if (!model.curves.contains(model.bias.phi_x)) {
        throw ConfigError("config error at /bias/phi_x: outside the tabulated curve range");
    }
    if (!(std::abs(model.bias.phi_x) < 0.5)) {
        throw ConfigError("config error at /bias/phi_x: |phi_x| must be < 0.5");
    }

    // --- sweep ----------------------------------------------------------------
    if (root.has_object("sweep")) {
        Section sw = root.object("sweep");
        const std::string axis = sw.text("axis");
        if (axis == "phi_z") model.sweep.axis = SweepSettings::Axis::phi_z;
        else if (axis == "phi_x") model.sweep.axis = SweepSettings::Axis::phi_x;
        else if (axis == "delta") model.sweep.axis = SweepSettings::Axis::delta;
        else {
            throw ConfigError("config error at /sweep/axis: expected phi_z, phi_x or delta");
        }
        model.sweep.min = sw.number("min");
        model.sweep.max = sw.number("max");
        model.sweep.samples = sw.integer("samples", 1);
        if (model.sweep.samples < 1) {
            throw ConfigError("config error at /sweep/samples: must be >= 1");
        }
        model.sweep.phi_x = sw.number("phi_x", model.bias.phi_x);
        if (sw.has("phi_z")) model.sweep.phi_z = sw.number("phi_z");
        model.sweep.phi_z_offset = sw.number("phi_z_offset", 0.0);
        sw.finish();
        // Fail fast on ranges that would throw mid-sweep.
        if (model.sweep.axis == SweepSettings::Axis::phi_x) {
            if (!model.curves.contains(model.sweep.min) ||
                !model.curves.contains(model.sweep.max)) {
                throw ConfigError("config error at /sweep: phi_x range outside the tables");
            }
        } else if (model.sweep.axis == SweepSettings::Axis::phi_z) {
            if (!model.curves.contains(model.sweep.phi_x)) {
                throw ConfigError("config error at /sweep/phi_x: outside the tables");
            }
        } else {
            const double dmin = model.curves.delta(model.curves.phi_x_min()) / kTwoPi;
            const double dmax = model.curves.delta(model.curves.phi_x_max()) / kTwoPi;
            const double lo = std::min(dmin, dmax);
            const double hi = std::max(dmin, dmax);
            if (!(model.sweep.min >= lo && model.sweep.min <= hi &&
                  model.sweep.max >= lo && model.sweep.max <= hi)) {
                throw ConfigError("config error at /sweep: delta range outside the tables (Hz)");
            }
        }
    } else {
        model.sweep.axis = SweepSettings::Axis::phi_z;
        model.sweep.phi_x = model.bias.phi_x;
        const double sym = symmetry_point(model.curves, model.bias.phi_x);
        model.sweep.min = sym - 0.01;
        model.sweep.max = sym + 0.01;
        model.sweep.samples = 41;
    }

    // --- anneal ----------------------------------------------------------------
    if (root.has_object("anneal")) {
        Section an = root.object("anneal");
        model.anneal.samples = an.integer("samples", 41);
        model.anneal.phi_x_start = an.number("phi_x_start");
        model.anneal.phi_x_end = an.number("phi_x_end");
        model.anneal.phi_z_offset = an.number("phi_z_offset", 0.0);
        an.finish();
        if (model.anneal.samples < 1) {
            throw ConfigError("config error at /anneal/samples: must be >= 1");
        }
        if (!model.curves.contains(model.anneal.phi_x_start) ||
            !model.curves.contains(model.anneal.phi_x_end)) {
            throw ConfigError("config error at /anneal: phi_x path outside the tables");
        }
    } else {
        model.anneal.phi_x_start = model.curves.phi_x_max() - 1e-6;
        model.anneal.phi_x_end = model.curves.phi_x_min() + 1e-6;
        model.anneal.samples = 41;
    }

    // --- validate ----------------------------------------------------------------
    if (root.has_object("validate")) {
        Section va = root.object("validate");
        model.validate.dt = va.positive("dt_s");
        model.validate.n_samples = va.integer("n_samples", 8192);
        model.validate.n_traces = va.integer("n_traces", 1000);
        model.validate.seed = static_cast<std::uint64_t>(va.integer("seed", 1));
        model.validate.tolerance = va.number("tolerance", 0.10);
        if (va.has("alpha_mc")) model.validate.alpha_mc = va.in_range("alpha_mc", 0.5, 1.5);
        va.finish();
        if (model.validate.n_samples < 16 || model.validate.n_traces < 1) {
            throw ConfigError("config error at /validate: n_samples/n_traces too small");
        }
    }

    // --- output (directory handled by the CLI) ---------------------------------
    if (root.has_object("output")) {
        Section out = root.object("output");
        if (out.has("directory")) out.text("directory");
        if (out.has("formats")) out.raw("formats");
        out.finish();
    }

    root.finish();
    return model;
}

}  // namespace fluxdec
