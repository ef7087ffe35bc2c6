#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dopf/battery.hpp"
#include "dopf/common.hpp"
#include "dopf/effpoly.hpp"
#include "dopf/netmodel.hpp"
#include "dopf/qcqp/kkt.hpp"
#include "dopf/qcqp/problem.hpp"
#include "dopf/qcqp/solver.hpp"
#include "dopf/topology.hpp"
#include "dopf/vsc.hpp"

namespace dopf {

// =========================================================================
// Receding-horizon dispatch
// =========================================================================
//
// Each interval the controller rebuilds a convex program over the horizon:
// stacked converter voltages plus split charge/discharge powers per battery
// at every step, and one pair of band slacks per battery for the whole
// horizon. Conversion efficiencies are evaluated once per interval at the
// measured state of charge and the last dispatched power, then held fixed
// across the horizon, which is what keeps the program convex. Converter
// power is affine in the voltages around the previous command; the network
// itself is exact, so the only model error the plant sees is the power
// linearization and the load forecast.

struct BatteryUnit {
    int vsc = -1; ///< index into the topology's converter list
    BatteryPack pack;
    EffPoly eff;
    double soc_init = 0.5;
};

/// Converter whose power is dictated from outside (a PV inverter running at
/// its own maximum-power point). The dispatcher pins it to the forecast.
struct ExogenousUnit {
    int vsc = -1;
    double p_min = 0.0;
    double p_max = 100e3;
};

struct MpcOptions {
    int horizon = 30;
    double step_seconds = 60.0;
    double v_nominal = 415.0;
    double v_band_lo = 0.9;
    double v_band_hi = 1.1;
    double i_phase_rms_max = 150.0;
    double soc_lo = 0.2;
    double soc_hi = 1.0;
    double slack_penalty = 1e6;   ///< per unit of band violation, exact penalty
    double power_reg = 1e-9;      ///< quadratic tie-breaker on the power splits
    bool variable_efficiency = true;
    double const_eta_ch = 0.9981; ///< used when variable_efficiency is off
    double const_eta_dis = 0.9980;
    double eff_eval_power_floor = 1e3; ///< avoids the eta = 1 corner at idle
    double load_quantum = 1e-3;   ///< ohm granularity of the gain cache key
    qcqp::SolverOptions solver;
};

/// One interval's dispatch: first-step commands plus diagnostics.
struct MpcPlan {
    bool feasible = false;
    std::string alarm;            ///< empty when the solve went through
    Eigen::VectorXd v_cmd;        ///< stacked converter voltages, 2 per VSC
    Eigen::VectorXd p_ch;         ///< per battery, first step [W]
    Eigen::VectorXd p_dis;
    Eigen::VectorXd soc_end;      ///< predicted per-battery SoC at horizon end
    double predicted_loss_w = 0.0; ///< first-step conduction + conversion loss
    double solve_seconds = 0.0;
    int iterations = 0;
    qcqp::QcqpSolution solution;  ///< full trajectory for analysis
};

namespace detail {

/// Everything derived from one load vector: network gains, per-converter
/// static models, and the conduction-loss form. Rebuilt only when the
/// quantized loads change.
struct GainSet {
    StaticGains gains;
    std::vector<VscStaticModel> models;
    Eigen::MatrixXd loss_form;
    std::vector<int> passive_buses;
};

[[nodiscard]] inline GainSet build_gain_set(const NetworkTopology& t) {
    GainSet gs;
    gs.gains = steady_state_gains(t);
    gs.models.reserve(static_cast<size_t>(t.n_vsc()));
    for (int i = 0; i < t.n_vsc(); ++i)
        gs.models.push_back(vsc_static_gains(gs.gains, t.vscs[static_cast<size_t>(i)].lcl, i));
    gs.loss_form = loss_quadratic_forms(gs.gains, t).total();
    for (int b = 0; b < t.n_bus(); ++b)
        if (t.vsc_at(b) < 0) gs.passive_buses.push_back(b);
    return gs;
}

} // namespace detail

class MpcController {
  public:
    MpcController(NetworkTopology base, std::vector<BatteryUnit> batteries,
                  std::vector<ExogenousUnit> exogenous, MpcOptions opt = {})
        : topo_(std::move(base)), batteries_(std::move(batteries)),
          exogenous_(std::move(exogenous)), opt_(opt) {
        validate(topo_);
        if (opt_.horizon < 1) throw validation_error("mpc: horizon must be at least 1");
        std::vector<int> owner(static_cast<size_t>(topo_.n_vsc()), 0);
        for (const auto& b : batteries_) {
            if (b.vsc < 0 || b.vsc >= topo_.n_vsc())
                throw validation_error("mpc: battery converter index out of range");
            owner[static_cast<size_t>(b.vsc)]++;
        }
        for (const auto& e : exogenous_) {
            if (e.vsc < 0 || e.vsc >= topo_.n_vsc())
                throw validation_error("mpc: exogenous converter index out of range");
            owner[static_cast<size_t>(e.vsc)]++;
        }
        for (int i = 0; i < topo_.n_vsc(); ++i)
            if (owner[static_cast<size_t>(i)] != 1)
                throw validation_error("mpc: converter " + std::to_string(i) +
                                       " must be claimed by exactly one battery or exogenous unit");
        v_lin_ = flat_voltages();
    }

    [[nodiscard]] int n_vsc() const { return topo_.n_vsc(); }
    [[nodiscard]] int n_batt() const { return static_cast<int>(batteries_.size()); }
    [[nodiscard]] int n_exo() const { return static_cast<int>(exogenous_.size()); }
    [[nodiscard]] const MpcOptions& options() const { return opt_; }
    [[nodiscard]] const std::vector<BatteryUnit>& batteries() const { return batteries_; }

    // --- variable layout ---------------------------------------------------
    [[nodiscard]] int block_size() const { return 2 * n_vsc() + 2 * n_batt(); }
    [[nodiscard]] int n_vars() const { return opt_.horizon * block_size() + 2 * n_batt(); }
    [[nodiscard]] int index_v(int step, int vsc, int axis) const {
        return step * block_size() + 2 * vsc + axis;
    }
    [[nodiscard]] int index_p_ch(int step, int batt) const {
        return step * block_size() + 2 * n_vsc() + batt;
    }
    [[nodiscard]] int index_p_dis(int step, int batt) const {
        return step * block_size() + 2 * n_vsc() + n_batt() + batt;
    }
    [[nodiscard]] int index_slack_lo(int batt) const {
        return opt_.horizon * block_size() + 2 * batt;
    }
    [[nodiscard]] int index_slack_hi(int batt) const {
        return opt_.horizon * block_size() + 2 * batt + 1;
    }

    /// Efficiencies the next build will use, one (charge, discharge) pair per
    /// battery. Exposed so tests and the plant report can show what the
    /// controller believed.
    [[nodiscard]] std::vector<std::pair<double, double>> interval_efficiencies(
        const Eigen::VectorXd& soc, const Eigen::VectorXd& last_power_w) const {
        std::vector<std::pair<double, double>> out;
        out.reserve(batteries_.size());
        for (size_t b = 0; b < batteries_.size(); ++b) {
            if (!opt_.variable_efficiency) {
                out.emplace_back(opt_.const_eta_ch, opt_.const_eta_dis);
                continue;
            }
            const double p = std::max(std::abs(last_power_w(static_cast<Eigen::Index>(b))),
                                      opt_.eff_eval_power_floor);
            const double s = soc(static_cast<Eigen::Index>(b));
            const double ch = eval_eff(batteries_[b].eff, s, p, EffDirection::charge);
            const double dis = 1.0 / eval_eff(batteries_[b].eff, s, p, EffDirection::discharge);
            out.emplace_back(ch, dis);
        }
        return out;
    }

    /// Assembles the interval's convex program. `load_r` is the predicted
    /// resistance per load, `soc` the measured per-battery state of charge,
    /// `pv_forecast_w` the predicted power per exogenous unit, and
    /// `last_power_w` the previous net battery powers (for the efficiency
    /// evaluation point).
    [[nodiscard]] qcqp::QcqpProblem build(const std::vector<double>& load_r,
                                          const Eigen::VectorXd& soc,
                                          const Eigen::VectorXd& pv_forecast_w,
                                          const Eigen::VectorXd& last_power_w) {
        if (static_cast<int>(load_r.size()) != topo_.n_load())
            throw validation_error("mpc: load resistance vector size mismatch");
        if (soc.size() != n_batt() || last_power_w.size() != n_batt())
            throw validation_error("mpc: battery state vector size mismatch");
        if (pv_forecast_w.size() != n_exo())
            throw validation_error("mpc: forecast vector size mismatch");

        refresh_gains(load_r);
        const detail::GainSet& gs = *gain_set_;
        const int nv = n_vsc();
        const int nb = n_batt();
        const int nn = n_vars();
        const int hor = opt_.horizon;
        const double vmax = opt_.v_band_hi * opt_.v_nominal;
        const double vmin = opt_.v_band_lo * opt_.v_nominal;
        const double imax = std::sqrt(3.0) * opt_.i_phase_rms_max;

        const auto etas = interval_efficiencies(soc, last_power_w);

        qcqp::QcqpProblem pr = qcqp::make_problem(nn);

        // objective: conduction losses per step, conversion losses, slack
        // penalty, and the power regularizer
        std::vector<Eigen::Triplet<double>> qt;
        for (int k = 0; k < hor; ++k) {
            const int v0 = index_v(k, 0, 0);
            for (int r = 0; r < 2 * nv; ++r)
                for (int c = 0; c < 2 * nv; ++c)
                    if (gs.loss_form(r, c) != 0.0)
                        qt.emplace_back(v0 + r, v0 + c, 2.0 * gs.loss_form(r, c));
            for (int b = 0; b < nb; ++b) {
                qt.emplace_back(index_p_ch(k, b), index_p_ch(k, b), 2.0 * opt_.power_reg);
                qt.emplace_back(index_p_dis(k, b), index_p_dis(k, b), 2.0 * opt_.power_reg);
                pr.c(index_p_ch(k, b)) = 1.0 - etas[static_cast<size_t>(b)].first;
                pr.c(index_p_dis(k, b)) = 1.0 / etas[static_cast<size_t>(b)].second - 1.0;
            }
        }
        for (int b = 0; b < nb; ++b) {
            pr.c(index_slack_lo(b)) = opt_.slack_penalty;
            pr.c(index_slack_hi(b)) = opt_.slack_penalty;
        }
        pr.q.resize(nn, nn);
        pr.q.setFromTriplets(qt.begin(), qt.end());

        // bounds
        pr.lb.setConstant(-std::numeric_limits<double>::infinity());
        pr.ub.setConstant(std::numeric_limits<double>::infinity());
        for (int k = 0; k < hor; ++k) {
            for (int i = 0; i < nv; ++i) pr.lb(index_v(k, i, 0)) = vmin;
            for (int b = 0; b < nb; ++b) {
                pr.lb(index_p_ch(k, b)) = 0.0;
                pr.ub(index_p_ch(k, b)) = batteries_[static_cast<size_t>(b)].pack.p_ch_max;
                pr.lb(index_p_dis(k, b)) = 0.0;
                pr.ub(index_p_dis(k, b)) = batteries_[static_cast<size_t>(b)].pack.p_dis_max;
            }
        }
        for (int b = 0; b < nb; ++b) {
            pr.lb(index_slack_lo(b)) = 0.0;
            pr.lb(index_slack_hi(b)) = 0.0;
        }

        // power links: affine converter power equals the dispatched split
        // (batteries) or the pinned forecast (exogenous units)
        std::vector<Eigen::Triplet<double>> at;
        Eigen::VectorXd bvec(hor * nv);
        std::vector<qcqp::SocConstraint> socs;
        int row = 0;
        std::vector<PowerLinearization> lin(static_cast<size_t>(nv));
        for (int i = 0; i < nv; ++i) lin[static_cast<size_t>(i)] = linearize_power(gs.models[static_cast<size_t>(i)], v_lin_);
        for (int k = 0; k < hor; ++k) {
            const int v0 = index_v(k, 0, 0);
            for (size_t b = 0; b < batteries_.size(); ++b) {
                const int i = batteries_[b].vsc;
                for (int c = 0; c < 2 * nv; ++c)
                    if (lin[static_cast<size_t>(i)].coeff(c) != 0.0)
                        at.emplace_back(row, v0 + c, lin[static_cast<size_t>(i)].coeff(c));
                at.emplace_back(row, index_p_dis(k, static_cast<int>(b)), -1.0);
                at.emplace_back(row, index_p_ch(k, static_cast<int>(b)), 1.0);
                bvec(row) = -lin[static_cast<size_t>(i)].offset;
                ++row;
            }
            for (size_t e = 0; e < exogenous_.size(); ++e) {
                const int i = exogenous_[e].vsc;
                const double pin = std::clamp(pv_forecast_w(static_cast<Eigen::Index>(e)),
                                              exogenous_[e].p_min, exogenous_[e].p_max);
                for (int c = 0; c < 2 * nv; ++c)
                    if (lin[static_cast<size_t>(i)].coeff(c) != 0.0)
                        at.emplace_back(row, v0 + c, lin[static_cast<size_t>(i)].coeff(c));
                bvec(row) = pin - lin[static_cast<size_t>(i)].offset;
                ++row;
            }
        }
        pr.a.resize(row, nn);
        pr.a.setFromTriplets(at.begin(), at.end());
        pr.b = bvec.head(row);

        // band cones: converter voltage, converter current, passive bus
        // voltage magnitude; plus the linear floor on every d-component
        for (int k = 0; k < hor; ++k) {
            const int v0 = index_v(k, 0, 0);
            for (int i = 0; i < nv; ++i) {
                qcqp::SocConstraint sc;
                sc.f.resize(2, nn);
                sc.f.insert(0, v0 + 2 * i) = 1.0;
                sc.f.insert(1, v0 + 2 * i + 1) = 1.0;
                sc.g = Eigen::VectorXd::Zero(2);
                sc.d = Eigen::VectorXd::Zero(nn);
                sc.e = vmax;
                socs.push_back(std::move(sc));
            }
            for (int i = 0; i < nv; ++i) {
                qcqp::SocConstraint sc;
                sc.f.resize(2, nn);
                const auto& gil = gs.models[static_cast<size_t>(i)].g_il;
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2 * nv; ++c)
                        if (gil(r, c) != 0.0) sc.f.insert(r, v0 + c) = gil(r, c);
                sc.g = Eigen::VectorXd::Zero(2);
                sc.d = Eigen::VectorXd::Zero(nn);
                sc.e = imax;
                socs.push_back(std::move(sc));
            }
            for (const int bus : gs.passive_buses) {
                const Eigen::MatrixXd gv = gs.gains.vbus_block(bus);
                qcqp::SocConstraint sc;
                sc.f.resize(2, nn);
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2 * nv; ++c)
                        if (gv(r, c) != 0.0) sc.f.insert(r, v0 + c) = gv(r, c);
                sc.g = Eigen::VectorXd::Zero(2);
                sc.d = Eigen::VectorXd::Zero(nn);
                sc.e = vmax;
                socs.push_back(std::move(sc));
            }
        }
        pr.socs = std::move(socs);

        // linear rows: passive-bus d-component floor and the cumulative
        // state-of-charge band with its horizon-wide slacks
        std::vector<qcqp::QuadConstraint> quads;
        for (int k = 0; k < hor; ++k) {
            const int v0 = index_v(k, 0, 0);
            for (const int bus : gs.passive_buses) {
                const Eigen::MatrixXd gv = gs.gains.vbus_block(bus);
                qcqp::QuadConstraint qc;
                qc.p.resize(nn, nn);
                qc.q = Eigen::VectorXd::Zero(nn);
                for (int c = 0; c < 2 * nv; ++c) qc.q(v0 + c) = -gv(0, c);
                qc.bound = -vmin;
                quads.push_back(std::move(qc));
            }
        }
        for (int b = 0; b < nb; ++b) {
            const auto& pk = batteries_[static_cast<size_t>(b)].pack;
            const double alpha = etas[static_cast<size_t>(b)].first * opt_.step_seconds / pk.e_max;
            const double beta = opt_.step_seconds / (etas[static_cast<size_t>(b)].second * pk.e_max);
            const double s0 = soc(b);
            for (int k = 1; k <= hor; ++k) {
                qcqp::QuadConstraint hi;
                hi.p.resize(nn, nn);
                hi.q = Eigen::VectorXd::Zero(nn);
                qcqp::QuadConstraint lo = hi;
                for (int j = 0; j < k; ++j) {
                    hi.q(index_p_ch(j, b)) = alpha;
                    hi.q(index_p_dis(j, b)) = -beta;
                    lo.q(index_p_ch(j, b)) = -alpha;
                    lo.q(index_p_dis(j, b)) = beta;
                }
                hi.q(index_slack_hi(b)) = -1.0;
                hi.bound = opt_.soc_hi - s0;
                lo.q(index_slack_lo(b)) = -1.0;
                lo.bound = s0 - opt_.soc_lo;
                quads.push_back(std::move(hi));
                quads.push_back(std::move(lo));
            }
        }
        pr.quads = std::move(quads);
        return pr;
    }

    /// Solves one interval and returns the commands. On solver failure the
    /// previous commands are held and the alarm names the reason.
    [[nodiscard]] MpcPlan step(const std::vector<double>& load_r, const Eigen::VectorXd& soc,
                               const Eigen::VectorXd& pv_forecast_w,
                               const Eigen::VectorXd& last_power_w) {
        qcqp::QcqpProblem pr = build(load_r, soc, pv_forecast_w, last_power_w);
        const Eigen::VectorXd* warm = warm_.size() == pr.n ? &warm_ : nullptr;
        qcqp::QcqpSolution sol = qcqp::solve(pr, opt_.solver, warm);

        MpcPlan plan;
        plan.solve_seconds = sol.solve_seconds;
        plan.iterations = sol.iterations;
        if (sol.status != qcqp::SolveStatus::optimal) {
            plan.feasible = false;
            plan.alarm = "dispatch solve " + std::string(qcqp::to_string(sol.status)) +
                         ", holding previous commands";
            plan.v_cmd = last_plan_ ? last_plan_->v_cmd : flat_voltages();
            plan.p_ch = last_plan_ ? last_plan_->p_ch : Eigen::VectorXd::Zero(n_batt());
            plan.p_dis = last_plan_ ? last_plan_->p_dis : Eigen::VectorXd::Zero(n_batt());
            plan.soc_end = soc;
            return plan;
        }

        plan.feasible = true;
        plan.solution = sol;
        plan.v_cmd.resize(2 * n_vsc());
        for (int i = 0; i < 2 * n_vsc(); ++i) plan.v_cmd(i) = sol.x(index_v(0, 0, 0) + i);
        plan.p_ch.resize(n_batt());
        plan.p_dis.resize(n_batt());
        for (int b = 0; b < n_batt(); ++b) {
            plan.p_ch(b) = sol.x(index_p_ch(0, b));
            plan.p_dis(b) = sol.x(index_p_dis(0, b));
        }
        const auto etas = interval_efficiencies(soc, last_power_w);
        plan.soc_end = soc;
        for (int b = 0; b < n_batt(); ++b) {
            const auto& pk = batteries_[static_cast<size_t>(b)].pack;
            for (int k = 0; k < opt_.horizon; ++k)
                plan.soc_end(b) = soc_step(plan.soc_end(b), sol.x(index_p_ch(k, b)),
                                           sol.x(index_p_dis(k, b)), etas[static_cast<size_t>(b)].first,
                                           etas[static_cast<size_t>(b)].second, opt_.step_seconds,
                                           pk.e_max);
        }
        plan.predicted_loss_w = plan.v_cmd.dot(gain_set_->loss_form * plan.v_cmd);
        for (int b = 0; b < n_batt(); ++b)
            plan.predicted_loss_w += (1.0 - etas[static_cast<size_t>(b)].first) * plan.p_ch(b) +
                                     (1.0 / etas[static_cast<size_t>(b)].second - 1.0) * plan.p_dis(b);

        // shift the trajectory one step for the next warm start and relinearize
        // around the fresh command
        warm_.resize(pr.n);
        const int bs = block_size();
        for (int k = 0; k < opt_.horizon - 1; ++k)
            warm_.segment(k * bs, bs) = sol.x.segment((k + 1) * bs, bs);
        warm_.segment((opt_.horizon - 1) * bs, bs) = sol.x.segment((opt_.horizon - 1) * bs, bs);
        warm_.tail(2 * n_batt()) = sol.x.tail(2 * n_batt());
        v_lin_ = plan.v_cmd;
        last_plan_ = plan;
        return plan;
    }

    /// Current linearization point for the converter powers.
    [[nodiscard]] const Eigen::VectorXd& linearization_point() const { return v_lin_; }
    void set_linearization_point(const Eigen::VectorXd& v) {
        if (v.size() != 2 * n_vsc()) throw validation_error("mpc: linearization point size mismatch");
        v_lin_ = v;
    }

    [[nodiscard]] Eigen::VectorXd flat_voltages() const {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * n_vsc());
        for (int i = 0; i < n_vsc(); ++i) v(2 * i) = opt_.v_nominal;
        return v;
    }

    /// Network gains at the most recent predicted loads.
    [[nodiscard]] const detail::GainSet& gain_set() const {
        if (!gain_set_) throw numeric_error("mpc: no gains built yet");
        return *gain_set_;
    }

  private:
    void refresh_gains(const std::vector<double>& load_r) {
        std::vector<int64_t> key(load_r.size());
        for (size_t i = 0; i < load_r.size(); ++i)
            key[i] = static_cast<int64_t>(std::llround(load_r[i] / opt_.load_quantum));
        if (gain_set_ && key == gain_key_) return;
        NetworkTopology t = topo_;
        for (size_t i = 0; i < load_r.size(); ++i) {
            if (!(load_r[i] > 0.0))
                throw validation_error("mpc: predicted load resistance must be positive");
            t.loads[i].r = load_r[i];
        }
        gain_set_ = detail::build_gain_set(t);
        gain_key_ = std::move(key);
    }

    NetworkTopology topo_;
    std::vector<BatteryUnit> batteries_;
    std::vector<ExogenousUnit> exogenous_;
    MpcOptions opt_;

    std::optional<detail::GainSet> gain_set_;
    std::vector<int64_t> gain_key_;
    Eigen::VectorXd v_lin_;
    Eigen::VectorXd warm_;
    std::optional<MpcPlan> last_plan_;
};

} // namespace dopf
