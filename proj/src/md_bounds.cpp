#include "mdnet/md_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "mdnet/error.hpp"

namespace mdnet {

namespace {

const double kLog2e = std::numbers::log2e;
const double kLog2of3 = std::log2(3.0);

void require_vars(const Distribution& dist, const VarSet& names)
{
    for (const auto& n : names)
        if (!dist.has(n))
            throw ArgumentError("distribution lacks variable '" + n + "'");
}

VarSet with(VarSet a, const VarSet& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

} // namespace

double pinsker_mi_to_l1(double mi_bits)
{
    if (mi_bits < 0.0) {
        if (mi_bits < -1e-12)
            throw ArgumentError("mutual information must be nonnegative");
        mi_bits = 0.0;
    }
    return std::sqrt(mi_bits / kLog2e);
}

double chsh_l1_lower(double chsh_value) { return std::max(0.0, (chsh_value - 2.0) / 4.0); }

double chsh_mi_lower(double chsh_value)
{
    if (chsh_value <= 2.0)
        return 0.0;
    const double v = std::min(chsh_value, 4.0);
    return std::max(0.0, 2.0 - binary_entropy((4.0 - v) / 8.0) - (4.0 + v) / 8.0 * kLog2of3);
}

double cglmp_l1_lower(double cglmp_value) { return std::max(0.0, (cglmp_value - 2.0) / 4.0); }

MerminMode parse_mermin_mode(const std::string& name)
{
    if (name == "uniform-8")
        return MerminMode::Uniform8;
    if (name == "odd-4")
        return MerminMode::Odd4;
    throw ArgumentError("unknown Mermin input mode '" + name + "' (expected uniform-8 or odd-4)");
}

std::string to_string(MerminMode mode) { return mode == MerminMode::Uniform8 ? "uniform-8" : "odd-4"; }

double mermin_mi_lower(double m, MerminMode mode)
{
    if (m <= 2.0)
        return 0.0;
    m = std::min(m, 4.0);
    const double h = binary_entropy((4.0 - m) / 8.0);
    double v = 0.0;
    switch (mode) {
    case MerminMode::Uniform8:
        v = 1.0 - 0.5 * h - (4.0 + m) / 16.0 * kLog2of3;
        break;
    case MerminMode::Odd4:
        v = 2.0 - h - (4.0 + m) / 8.0 * kLog2of3;
        break;
    }
    return std::max(0.0, v);
}

ThetaResult theta(const Distribution& dist, const std::string& x, const std::string& y, const VarSet& r)
{
    if (r.empty())
        throw ArgumentError("theta needs at least one R variable");
    require_vars(dist, with({x, y}, r));
    const double hxy = entropy(dist, {x, y});
    const double hr = entropy(dist, r);
    const double i3 = tripartite_information(dist, {x}, {y}, r);
    const double ixr = mutual_information(dist, {x}, r);
    const double iyr = mutual_information(dist, {y}, r);
    ThetaResult t;
    t.expressions[0] = entropy(dist, with({x, y}, r)) - hr;
    t.expressions[1] = hxy - i3 - ixr - iyr;
    t.expressions[2] = hxy + hr - 2.0 * i3 - 2.0 * ixr - 2.0 * iyr;
    t.value = *std::min_element(t.expressions.begin(), t.expressions.end());
    // values equal up to rounding count as ties and go to the lower label
    t.argmin = 1;
    while (t.expressions[static_cast<std::size_t>(t.argmin - 1)] > t.value + 1e-12)
        ++t.argmin;
    return t;
}

double h_inputs_given_r(const Distribution& dist, const VarSet& inputs, const VarSet& r)
{
    require_vars(dist, with(inputs, r));
    return entropy(dist, with(inputs, r)) - entropy(dist, r);
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::ClassicalExplainable:
        return "classical-explainable";
    case Verdict::Nonclassical:
        return "nonclassical";
    case Verdict::Inconclusive:
        return "inconclusive";
    }
    return "inconclusive";
}

Verdict decide(double lower, double upper, double tol)
{
    if (lower > upper + tol)
        return Verdict::Nonclassical;
    if (lower <= tol)
        return Verdict::ClassicalExplainable;
    return Verdict::Inconclusive;
}

namespace {

void require_chsh_shape(const Behavior& b)
{
    if (b.inputs().size() != 2 || b.outputs().size() != 2)
        throw ArgumentError("expected a bipartite behavior");
}

MdReport make_report(double lower, double upper, std::vector<std::pair<std::string, double>> comps)
{
    MdReport r;
    r.lower_bound_bits = lower;
    r.upper_bound_bits = upper;
    r.verdict = decide(lower, upper);
    r.components = std::move(comps);
    return r;
}

} // namespace

MdReport check_chsh_mi(const Behavior& behavior, const Distribution& md_dist, const std::string& x,
                       const std::string& y, const VarSet& r)
{
    require_chsh_shape(behavior);
    const double c = chsh(behavior);
    const auto t = theta(md_dist, x, y, r);
    return make_report(chsh_mi_lower(c), t.value,
                       {{"chsh", c}, {"theta", t.value}, {"theta_argmin", t.argmin}});
}

MdReport check_chsh_l1(const Behavior& behavior, const Distribution& md_dist, const std::string& x,
                       const std::string& y, const VarSet& r)
{
    require_chsh_shape(behavior);
    const double c = chsh(behavior);
    const auto t = theta(md_dist, x, y, r);
    return make_report(chsh_l1_lower(c), pinsker_mi_to_l1(t.value),
                       {{"chsh", c}, {"theta", t.value}, {"theta_argmin", t.argmin}});
}

MdReport check_cglmp(const Behavior& behavior, int d, const Distribution& md_dist, const std::string& x,
                     const std::string& y, const VarSet& r)
{
    const double v = cglmp(behavior, d);
    const auto t = theta(md_dist, x, y, r);
    return make_report(cglmp_l1_lower(v), pinsker_mi_to_l1(t.value),
                       {{"cglmp", v}, {"theta", t.value}, {"theta_argmin", t.argmin}});
}

LowerFormula parse_lower_formula(const std::string& name)
{
    if (name == "chsh-mi")
        return LowerFormula::ChshMi;
    if (name == "chsh-l1")
        return LowerFormula::ChshL1;
    if (name == "cglmp-l1")
        return LowerFormula::CglmpL1;
    if (name == "mermin-uniform-8" || name == "mermin")
        return LowerFormula::MerminUniform8;
    if (name == "mermin-odd-4")
        return LowerFormula::MerminOdd4;
    throw ArgumentError("unknown lower-bound formula '" + name + "'");
}

std::string to_string(LowerFormula f)
{
    switch (f) {
    case LowerFormula::ChshMi:
        return "chsh-mi";
    case LowerFormula::ChshL1:
        return "chsh-l1";
    case LowerFormula::CglmpL1:
        return "cglmp-l1";
    case LowerFormula::MerminUniform8:
        return "mermin-uniform-8";
    case LowerFormula::MerminOdd4:
        return "mermin-odd-4";
    }
    return "";
}

double evaluate_lower(LowerFormula f, double v)
{
    switch (f) {
    case LowerFormula::ChshMi:
        return chsh_mi_lower(v);
    case LowerFormula::ChshL1:
        return chsh_l1_lower(v);
    case LowerFormula::CglmpL1:
        return cglmp_l1_lower(v);
    case LowerFormula::MerminUniform8:
        return mermin_mi_lower(v, MerminMode::Uniform8);
    case LowerFormula::MerminOdd4:
        return mermin_mi_lower(v, MerminMode::Odd4);
    }
    return 0.0;
}

bool is_mi_formula(LowerFormula f) { return f != LowerFormula::ChshL1 && f != LowerFormula::CglmpL1; }

MdReport check_generic(double bell_value, LowerFormula f, const Distribution& md_dist, const VarSet& inputs,
                       const VarSet& r)
{
    const double lower = evaluate_lower(f, bell_value);
    const double h = h_inputs_given_r(md_dist, inputs, r);
    const double upper = is_mi_formula(f) ? h : pinsker_mi_to_l1(h);
    return make_report(lower, upper, {{"bell_value", bell_value}, {"h_inputs_given_r", h}});
}

double figure7_max_ratio() { return 1.0 - 1.0 / std::numbers::sqrt2; }

std::vector<Fig7Row> figure7_curves(int resolution)
{
    if (resolution < 2)
        throw ArgumentError("resolution must be at least 2");
    std::vector<Fig7Row> rows;
    const double rmax = figure7_max_ratio();
    for (int i = 0; i < resolution; ++i) {
        Fig7Row row;
        row.ratio = i == resolution - 1 ? rmax : rmax * i / (resolution - 1);
        row.chsh_mi = chsh_mi_lower(2.0 + 2.0 * std::numbers::sqrt2 * row.ratio);
        row.mermin_mi = mermin_mi_lower(2.0 + 4.0 * row.ratio, MerminMode::Uniform8);
        rows.push_back(row);
    }
    return rows;
}

std::string figure7_csv(const std::vector<Fig7Row>& rows)
{
    std::string out = "ratio,chsh_mi_lower,mermin_mi_lower\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.9f,%.9f,%.9f\n", r.ratio, r.chsh_mi, r.mermin_mi);
        out += buf;
    }
    return out;
}

} // namespace mdnet
