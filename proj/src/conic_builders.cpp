#include <algorithm>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "greenran/conic.hpp"

namespace greenran::conic {

const char* to_string(ConeKind kind) {
    switch (kind) {
        case ConeKind::Zero: return "zero";
        case ConeKind::Nonnegative: return "nonnegative";
        case ConeKind::SecondOrder: return "second_order";
    }
    return "unknown";
}

double AffineRow::eval(const Eigen::VectorXd& x) const {
    double value = constant;
    for (const Term& t : terms) value += t.coeff * x[t.var];
    return value;
}

int ConeProgram::count_blocks(ConeKind kind) const {
    return static_cast<int>(std::count_if(blocks.begin(), blocks.end(),
                                          [kind](const ConeBlock& b) { return b.kind == kind; }));
}

int ConeProgram::count_blocks_labelled(const std::string& prefix) const {
    return static_cast<int>(std::count_if(blocks.begin(), blocks.end(), [&](const ConeBlock& b) {
        return b.label.compare(0, prefix.size(), prefix) == 0;
    }));
}

double ConeProgram::max_violation(const Eigen::VectorXd& x) const {
    double worst = 0.0;
    for (const ConeBlock& block : blocks) {
        switch (block.kind) {
            case ConeKind::Zero:
                for (const AffineRow& row : block.rows) worst = std::max(worst, std::abs(row.eval(x)));
                break;
            case ConeKind::Nonnegative:
                for (const AffineRow& row : block.rows) worst = std::max(worst, -row.eval(x));
                break;
            case ConeKind::SecondOrder: {
                double tail = 0.0;
                for (std::size_t r = 1; r < block.rows.size(); ++r) {
                    const double v = block.rows[r].eval(x);
                    tail += v * v;
                }
                worst = std::max(worst, std::sqrt(tail) - block.rows.front().eval(x));
                break;
            }
        }
    }
    return worst;
}

void ConeProgram::check_well_formed() const {
    if (c.size() != n) throw ConfigError("objective length does not match variable count");
    for (const ConeBlock& block : blocks) {
        if (block.rows.empty()) throw ConfigError("cone block '" + block.label + "' has no rows");
        for (const AffineRow& row : block.rows) {
            for (const Term& t : row.terms) {
                if (t.var < 0 || t.var >= n) throw ConfigError("variable index out of range in '" + block.label + "'");
            }
        }
    }
}

std::array<AffineRow, 2> complex_soc_rows(const Eigen::VectorXcd& h, VarSpan v_span) {
    if (!v_span.valid() || v_span.length != 2 * h.size()) {
        throw ConfigError("complex_soc_rows: span length must be twice the channel dimension");
    }
    AffineRow re;
    AffineRow im;
    for (Eigen::Index j = 0; j < h.size(); ++j) {
        const int vr = v_span.offset + 2 * static_cast<int>(j);
        const int vi = vr + 1;
        // conj(h) * v = (hr - i hi)(vr + i vi)
        re.terms.push_back({vr, h[j].real()});
        re.terms.push_back({vi, h[j].imag()});
        im.terms.push_back({vr, -h[j].imag()});
        im.terms.push_back({vi, h[j].real()});
    }
    return {re, im};
}

namespace {

AffineRow scaled(AffineRow row, double factor) {
    for (Term& t : row.terms) t.coeff *= factor;
    row.constant *= factor;
    return row;
}

void append(AffineRow& into, const AffineRow& from) {
    into.terms.insert(into.terms.end(), from.terms.begin(), from.terms.end());
    into.constant += from.constant;
}

class ProgramBuilder {
public:
    ProgramBuilder(const SystemConfig& cfg, const Channel& ch) : cfg_(cfg), ch_(ch) {
        cfg.validate();
        if (ch.num_users() != cfg.num_users || ch.num_rrh() != cfg.num_rrh) {
            throw ConfigError("channel does not match configuration");
        }
        const auto L = static_cast<std::size_t>(cfg.num_rrh);
        p_.var_map.num_rrh = cfg.num_rrh;
        p_.var_map.num_users = cfg.num_users;
        p_.var_map.beam.assign(L * static_cast<std::size_t>(cfg.num_users), VarSpan{});
        p_.var_map.selection.assign(L, -1);
        p_.var_map.fixed_selection.assign(L, 0.0);
        p_.var_map.epigraph.assign(L, -1);
    }

    int add_var() { return p_.n++; }

    VarSpan add_span(int length) {
        VarSpan span{p_.n, length};
        p_.n += length;
        return span;
    }

    void include_rrh(int l) {
        for (int k = 0; k < cfg_.num_users; ++k) {
            p_.var_map.beam[static_cast<std::size_t>(l * cfg_.num_users + k)] = add_span(2 * cfg_.antennas[l]);
        }
    }

    bool included(int l) const { return p_.var_map.beam_span(l, 0).valid(); }

    /// Rows of the stacked real vector of v~_l.
    std::vector<AffineRow> stacked_rows(int l, double factor) const {
        std::vector<AffineRow> rows;
        for (int k = 0; k < cfg_.num_users; ++k) {
            const VarSpan& span = p_.var_map.beam_span(l, k);
            for (int j = 0; j < span.length; ++j) rows.push_back(AffineRow{{{span.offset + j, factor}}, 0.0});
        }
        return rows;
    }

    /// Re and Im of h_k^H v_i across all included RRHs.
    std::array<AffineRow, 2> gain_rows(int k, int i) const {
        std::array<AffineRow, 2> out;
        for (int l = 0; l < cfg_.num_rrh; ++l) {
            if (!included(l)) continue;
            const auto rows = complex_soc_rows(ch_.at(k, l), p_.var_map.beam_span(l, i));
            append(out[0], rows[0]);
            append(out[1], rows[1]);
        }
        return out;
    }

    // sqrt(gamma) * ||(h_k^H v_i)_{i != k}, sigma_k|| <= Re(h_k^H v_k), every row divided by sigma_k.
    void add_sinr_blocks() {
        for (int k = 0; k < cfg_.num_users; ++k) {
            const double sigma = std::sqrt(cfg_.noise_power_w[k]);
            const double root_gamma = std::sqrt(cfg_.sinr_target[k]);
            ConeBlock block{ConeKind::SecondOrder, {}, "sinr_" + std::to_string(k)};
            block.rows.push_back(scaled(gain_rows(k, k)[0], 1.0 / sigma));
            for (int i = 0; i < cfg_.num_users; ++i) {
                if (i == k) continue;
                auto rows = gain_rows(k, i);
                block.rows.push_back(scaled(rows[0], root_gamma / sigma));
                block.rows.push_back(scaled(rows[1], root_gamma / sigma));
            }
            block.rows.push_back(AffineRow{{}, root_gamma});
            p_.blocks.push_back(std::move(block));
        }
    }

    // ||v~_l|| <= bound, with bound = sqrt(P_l) * z_l or the constant sqrt(P_l) * z_fixed.
    void add_power_block(int l, AffineRow bound, const std::string& label) {
        ConeBlock block{ConeKind::SecondOrder, {std::move(bound)}, label + "_" + std::to_string(l)};
        auto rows = stacked_rows(l, 1.0);
        block.rows.insert(block.rows.end(), rows.begin(), rows.end());
        p_.blocks.push_back(std::move(block));
    }

    // ||v~_l||^2 <= t_l  <=>  ||(2 v~_l, t_l - 1)|| <= t_l + 1.
    int add_epigraph(int l) {
        const int t = add_var();
        p_.var_map.epigraph[static_cast<std::size_t>(l)] = t;
        ConeBlock block{ConeKind::SecondOrder, {AffineRow{{{t, 1.0}}, 1.0}}, "epigraph_" + std::to_string(l)};
        auto rows = stacked_rows(l, 2.0);
        block.rows.insert(block.rows.end(), rows.begin(), rows.end());
        block.rows.push_back(AffineRow{{{t, 1.0}}, -1.0});
        p_.blocks.push_back(std::move(block));
        return t;
    }

    int add_selection(int l) {
        const int z = add_var();
        p_.var_map.selection[static_cast<std::size_t>(l)] = z;
        p_.blocks.push_back(ConeBlock{ConeKind::Nonnegative,
                                      {AffineRow{{{z, 1.0}}, 0.0}, AffineRow{{{z, -1.0}}, 1.0}},
                                      "box_" + std::to_string(l)});
        return z;
    }

    ConeProgram& program() { return p_; }

    ConeProgram finish(const std::vector<std::pair<int, double>>& objective, double c0) {
        p_.c = Eigen::VectorXd::Zero(p_.n);
        for (const auto& [var, coeff] : objective) p_.c[var] += coeff;
        p_.c0 = c0;
        return std::move(p_);
    }

private:
    const SystemConfig& cfg_;
    const Channel& ch_;
    ConeProgram p_;
};

}  // namespace

ConeProgram build_fixed_support(const SystemConfig& cfg, const Channel& ch, const std::vector<int>& active) {
    ProgramBuilder b(cfg, ch);
    std::vector<bool> on(static_cast<std::size_t>(cfg.num_rrh), false);
    for (int l : active) {
        if (l < 0 || l >= cfg.num_rrh) throw ConfigError("active RRH index out of range");
        on[static_cast<std::size_t>(l)] = true;
    }
    for (int l = 0; l < cfg.num_rrh; ++l) {
        if (on[l]) b.include_rrh(l);
    }
    b.add_sinr_blocks();
    std::vector<std::pair<int, double>> objective;
    double c0 = 0.0;
    for (int l = 0; l < cfg.num_rrh; ++l) {
        if (!on[l]) continue;
        b.program().var_map.fixed_selection[static_cast<std::size_t>(l)] = 1.0;
        b.add_power_block(l, AffineRow{{}, std::sqrt(cfg.max_power_w[l])}, "power");
        objective.emplace_back(b.add_epigraph(l), 1.0 / cfg.efficiency[l]);
        c0 += cfg.fronthaul_power_w[l];
    }
    return b.finish(objective, c0);
}

ConeProgram build_relaxed(const SystemConfig& cfg, const Channel& ch, const std::vector<Pin>& pins) {
    if (!pins.empty() && static_cast<int>(pins.size()) != cfg.num_rrh) {
        throw ConfigError("pin vector must have one entry per RRH");
    }
    auto pin_of = [&](int l) { return pins.empty() ? Pin::Free : pins[static_cast<std::size_t>(l)]; };

    ProgramBuilder b(cfg, ch);
    for (int l = 0; l < cfg.num_rrh; ++l) {
        if (pin_of(l) != Pin::Off) b.include_rrh(l);
    }
    b.add_sinr_blocks();
    std::vector<std::pair<int, double>> objective;
    double c0 = 0.0;
    for (int l = 0; l < cfg.num_rrh; ++l) {
        const double root_p = std::sqrt(cfg.max_power_w[l]);
        switch (pin_of(l)) {
            case Pin::Off:
                break;
            case Pin::On:
                b.program().var_map.fixed_selection[static_cast<std::size_t>(l)] = 1.0;
                b.add_power_block(l, AffineRow{{}, root_p}, "coupling");
                c0 += cfg.fronthaul_power_w[l];
                objective.emplace_back(b.add_epigraph(l), 1.0 / cfg.efficiency[l]);
                break;
            case Pin::Free: {
                const int z = b.add_selection(l);
                b.add_power_block(l, AffineRow{{{z, root_p}}, 0.0}, "coupling");
                objective.emplace_back(z, cfg.fronthaul_power_w[l]);
                objective.emplace_back(b.add_epigraph(l), 1.0 / cfg.efficiency[l]);
                break;
            }
        }
    }
    return b.finish(objective, c0);
}

ConeProgram build_surrogate(const SystemConfig& cfg, const Channel& ch, double lambda,
                            const Eigen::VectorXd& z_anchor) {
    if (!(lambda >= 0.0)) throw ConfigError("surrogate multiplier must be >= 0");
    if (z_anchor.size() != cfg.num_rrh) throw ConfigError("anchor length must equal L");
    ConeProgram p = build_relaxed(cfg, ch);
    const Eigen::ArrayXd centered = z_anchor.array() - 0.5;
    for (int l = 0; l < cfg.num_rrh; ++l) {
        p.c[p.var_map.selection[static_cast<std::size_t>(l)]] -= 2.0 * lambda * centered[l];
    }
    const double L = static_cast<double>(cfg.num_rrh);
    p.c0 += lambda * (L / 4.0 - centered.square().sum() + 2.0 * (centered * z_anchor.array()).sum());
    return p;
}

ConeProgram build_group_sparse(const SystemConfig& cfg, const Channel& ch, const std::vector<double>& weights) {
    if (static_cast<int>(weights.size()) != cfg.num_rrh) throw ConfigError("one weight per RRH required");
    ProgramBuilder b(cfg, ch);
    for (int l = 0; l < cfg.num_rrh; ++l) {
        if (!(weights[l] > 0.0)) throw ConfigError("group weights must be > 0");
        b.include_rrh(l);
    }
    b.add_sinr_blocks();
    std::vector<std::pair<int, double>> objective;
    for (int l = 0; l < cfg.num_rrh; ++l) {
        b.program().var_map.fixed_selection[static_cast<std::size_t>(l)] = 1.0;
        b.add_power_block(l, AffineRow{{}, std::sqrt(cfg.max_power_w[l])}, "power");
        const int s = b.add_var();
        b.program().var_map.epigraph[static_cast<std::size_t>(l)] = s;
        b.add_power_block(l, AffineRow{{{s, 1.0}}, 0.0}, "group");
        objective.emplace_back(s, weights[l]);
    }
    return b.finish(objective, 0.0);
}

Beamformer decode_beamformer(const SystemConfig& cfg, const ConeProgram& p, const Eigen::VectorXd& x) {
    Beamformer v = Beamformer::zeros(cfg);
    for (int l = 0; l < cfg.num_rrh; ++l) {
        for (int k = 0; k < cfg.num_users; ++k) {
            const VarSpan& span = p.var_map.beam_span(l, k);
            if (!span.valid()) continue;
            auto& out = v.at(l, k);
            for (Eigen::Index j = 0; j < out.size(); ++j) {
                out[j] = Complex(x[span.offset + 2 * j], x[span.offset + 2 * j + 1]);
            }
        }
    }
    return v;
}

Selection decode_selection(const ConeProgram& p, const Eigen::VectorXd& x) {
    Eigen::VectorXd z(p.var_map.num_rrh);
    for (int l = 0; l < p.var_map.num_rrh; ++l) {
        const int var = p.var_map.selection[static_cast<std::size_t>(l)];
        z[l] = var >= 0 ? std::clamp(x[var], 0.0, 1.0) : p.var_map.fixed_selection[static_cast<std::size_t>(l)];
    }
    return Selection::relaxed(std::move(z));
}

void write_program_json(const ConeProgram& p, std::ostream& out) {
    using nlohmann::json;
    json doc;
    doc["format"] = "greenran-cone-program";
    doc["version"] = 1;
    doc["n"] = p.n;
    doc["objective"] = {{"c", std::vector<double>(p.c.data(), p.c.data() + p.c.size())}, {"c0", p.c0}};
    json blocks = json::array();
    for (const ConeBlock& block : p.blocks) {
        json rows = json::array();
        for (const AffineRow& row : block.rows) {
            json terms = json::array();
            for (const Term& t : row.terms) terms.push_back({t.var, t.coeff});
            rows.push_back({{"terms", terms}, {"constant", row.constant}});
        }
        blocks.push_back({{"kind", to_string(block.kind)}, {"label", block.label}, {"rows", rows}});
    }
    doc["blocks"] = blocks;
    json beam = json::array();
    for (int l = 0; l < p.var_map.num_rrh; ++l) {
        for (int k = 0; k < p.var_map.num_users; ++k) {
            const VarSpan& s = p.var_map.beam_span(l, k);
            if (s.valid()) beam.push_back({{"rrh", l}, {"user", k}, {"offset", s.offset}, {"length", s.length}});
        }
    }
    doc["var_map"] = {{"beam", beam},
                      {"selection", p.var_map.selection},
                      {"fixed_selection", p.var_map.fixed_selection},
                      {"epigraph", p.var_map.epigraph}};
    out << doc.dump(1) << '\n';
}

}  // namespace greenran::conic
