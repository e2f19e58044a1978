#include "nanolaser/stats.hpp"

#include <algorithm>
#include <cmath>

#include "nanolaser/smallsignal.hpp"

namespace nanolaser {

void MomentAccumulator::observe(double n_p, double n_e, double dt) {
    if (!(dt > 0.0)) return;
    double w = dt;
    if (elapsed_ < burn_in_) {
        const double left = burn_in_ - elapsed_;
        elapsed_ += dt;
        if (dt <= left) return;
        w = dt - left;
    } else {
        elapsed_ += dt;
    }
    if (!shifted_) {
        shift_p_ = n_p;
        shift_e_ = n_e;
        shifted_ = true;
    }
    const double x = n_p - shift_p_;
    const double y = n_e - shift_e_;
    weight_ += w;
    sp_ += w * x;
    se_ += w * y;
    spp_ += w * x * x;
    see_ += w * y * y;
    spe_ += w * x * y;
    ++samples_;
}

void MomentAccumulator::merge(const MomentAccumulator& o) {
    elapsed_ += o.elapsed_;
    if (o.weight_ <= 0.0) return;
    if (!shifted_) {
        shift_p_ = o.shift_p_;
        shift_e_ = o.shift_e_;
        shifted_ = true;
    }
    const double dx = o.shift_p_ - shift_p_;
    const double dy = o.shift_e_ - shift_e_;
    const double W = o.weight_;
    spp_ += o.spp_ + 2.0 * dx * o.sp_ + W * dx * dx;
    see_ += o.see_ + 2.0 * dy * o.se_ + W * dy * dy;
    spe_ += o.spe_ + dy * o.sp_ + dx * o.se_ + W * dx * dy;
    sp_ += o.sp_ + W * dx;
    se_ += o.se_ + W * dy;
    weight_ += W;
    samples_ += o.samples_;
}

Moments MomentAccumulator::moments() const {
    if (!(weight_ > 0.0)) throw EmptyWindow("no observed time after burn-in");
    const double W = weight_;
    const double mx = sp_ / W;
    const double my = se_ / W;
    const double vx = std::max(0.0, spp_ / W - mx * mx);
    const double vy = std::max(0.0, see_ / W - my * my);
    const double cxy = spe_ / W - mx * my;
    Moments m;
    m.mean_np = shift_p_ + mx;
    m.mean_ne = shift_e_ + my;
    m.mean_np2 = vx + m.mean_np * m.mean_np;
    m.mean_ne2 = vy + m.mean_ne * m.mean_ne;
    m.mean_npne = cxy + m.mean_np * m.mean_ne;
    m.total_time = W;
    return m;
}

RunStatistics summarize(const Moments& m) {
    RunStatistics r;
    r.mean_np = m.mean_np;
    r.mean_ne = m.mean_ne;
    if (m.mean_np > 0.0) {
        const auto st = photon_statistics(m.mean_np, m.mean_np2 - m.mean_np * m.mean_np);
        r.g2_0 = st.g2_0;
        r.rin = st.rin;
        if (m.mean_ne > 0.0) r.corr_ratio = m.mean_npne / (m.mean_np * m.mean_ne);
    }
    return r;
}

double sample_mean(std::span<const double> v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v) {
    if (v.size() < 2) throw Error("standard deviation needs at least two runs");
    const double m = sample_mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double error_estimate(std::span<const double> base, std::span<const double> doubled) {
    const double sd = sample_std(base);
    if (doubled.empty()) return sd;
    const double step_err = std::abs(sample_mean(doubled) - sample_mean(base));
    return std::sqrt(step_err * step_err + sd * sd);
}

namespace {

template <class Get>
std::optional<std::vector<double>> collect(std::span<const RunStatistics> runs, Get get) {
    std::vector<double> out;
    out.reserve(runs.size());
    for (const auto& r : runs) {
        const std::optional<double> v = get(r);
        if (!v) return std::nullopt;
        out.push_back(*v);
    }
    return out;
}

} // namespace

SummaryStatistics aggregate_runs(std::span<const RunStatistics> base,
                                 std::span<const RunStatistics> doubled) {
    if (base.empty()) throw Error("no runs to aggregate");
    SummaryStatistics s;
    auto np = [](const RunStatistics& r) { return std::optional<double>(r.mean_np); };
    auto ne = [](const RunStatistics& r) { return std::optional<double>(r.mean_ne); };
    auto g2 = [](const RunStatistics& r) { return r.g2_0; };
    auto rin = [](const RunStatistics& r) { return r.rin; };
    auto corr = [](const RunStatistics& r) { return r.corr_ratio; };

    const auto np_b = *collect(base, np);
    s.mean_np = sample_mean(np_b);
    s.mean_ne = sample_mean(*collect(base, ne));
    const auto g2_b = collect(base, g2);
    const auto rin_b = collect(base, rin);
    const auto corr_b = collect(base, corr);
    if (g2_b) s.g2_0 = sample_mean(*g2_b);
    if (rin_b) s.rin = sample_mean(*rin_b);
    if (corr_b) s.corr_ratio = sample_mean(*corr_b);

    if (base.size() >= 2) {
        auto err = [&](const std::optional<std::vector<double>>& b, auto get) -> std::optional<double> {
            if (!b) return std::nullopt;
            if (doubled.empty()) return error_estimate(*b);
            const auto d = collect(doubled, get);
            if (!d) return std::nullopt;
            return error_estimate(*b, *d);
        };
        s.err_np = err(std::optional(np_b), np);
        s.err_g2 = err(g2_b, g2);
        s.err_rin = err(rin_b, rin);
    }
    return s;
}

SummaryStatistics exact_summary(const RunStatistics& truth) {
    SummaryStatistics s;
    s.mean_np = truth.mean_np;
    s.mean_ne = truth.mean_ne;
    s.g2_0 = truth.g2_0;
    s.rin = truth.rin;
    s.corr_ratio = truth.corr_ratio;
    s.err_np = 0.0;
    if (truth.g2_0) s.err_g2 = 0.0;
    if (truth.rin) s.err_rin = 0.0;
    return s;
}

RelativeError relative_error(std::span<const RunStatistics> runs, const RunStatistics& truth) {
    if (runs.empty()) throw Error("relative error needs at least one run");
    if (!(truth.mean_np != 0.0) || !truth.g2_0 || !truth.rin || *truth.g2_0 == 0.0 || *truth.rin == 0.0)
        throw Error("relative error needs non-zero truth values");
    double s_np = 0.0, s_g2 = 0.0, s_rin = 0.0;
    for (const auto& r : runs) {
        auto rel = [](std::optional<double> x, double t) {
            // A run without photons has no g2/RIN; count it as a 100% miss.
            const double d = x ? (*x - t) / t : 1.0;
            return d * d;
        };
        s_np += rel(r.mean_np, truth.mean_np);
        s_g2 += rel(r.g2_0, *truth.g2_0);
        s_rin += rel(r.rin, *truth.rin);
    }
    const double n = static_cast<double>(runs.size());
    RelativeError e;
    e.delta_np = std::sqrt(s_np / n);
    e.delta_g2 = std::sqrt(s_g2 / n);
    e.delta_rin = std::sqrt(s_rin / n);
    e.delta = std::max({e.delta_np, e.delta_g2, e.delta_rin});
    return e;
}

} // namespace nanolaser
