#include "mdnet/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mdnet/error.hpp"

namespace mdnet {

double Rng::normal()
{
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<double> Rng::simplex(std::size_t n)
{
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& x : w) {
        x = -std::log(1.0 - uniform());
        total += x;
    }
    if (total <= 0.0) {
        std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(n));
        return w;
    }
    for (auto& x : w)
        x /= total;
    return w;
}

namespace {

const char* const kInputNames[] = {"x", "y", "z", "w"};
const char* const kOutputNames[] = {"a", "b", "c", "d"};

std::size_t cells(const std::vector<VariableSpec>& vars)
{
    std::size_t n = 1;
    for (const auto& v : vars)
        n *= static_cast<std::size_t>(v.cardinality);
    return n;
}

std::vector<int> unravel(std::size_t flat, const std::vector<VariableSpec>& vars)
{
    std::vector<int> out(vars.size());
    for (std::size_t i = vars.size(); i-- > 0;) {
        out[i] = static_cast<int>(flat % static_cast<std::size_t>(vars[i].cardinality));
        flat /= static_cast<std::size_t>(vars[i].cardinality);
    }
    return out;
}

std::size_t ravel(const std::vector<int>& v, const std::vector<VariableSpec>& vars)
{
    std::size_t flat = 0;
    for (std::size_t i = 0; i < vars.size(); ++i)
        flat = flat * static_cast<std::size_t>(vars[i].cardinality) + static_cast<std::size_t>(v[i]);
    return flat;
}

std::size_t output_cell(const MdModel& m, std::size_t lambda, const std::vector<int>& x)
{
    const auto& s = m.strategies[lambda];
    std::vector<int> a(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        a[i] = s.responses[i][static_cast<std::size_t>(x[i])];
    return ravel(a, m.outputs);
}

} // namespace

FunctionalSpec parse_functional(const std::string& name)
{
    if (name == "chsh")
        return {FunctionalKind::Chsh, 2};
    if (name == "mermin")
        return {FunctionalKind::Mermin, 2};
    if (name.rfind("cglmp:", 0) == 0) {
        const std::string rest = name.substr(6);
        int d = 0;
        try {
            std::size_t used = 0;
            d = std::stoi(rest, &used);
            if (used != rest.size())
                d = 0;
        } catch (const std::exception&) {
            d = 0;
        }
        if (d < 2)
            throw ArgumentError("bad CGLMP dimension in '" + name + "'");
        return {FunctionalKind::Cglmp, d};
    }
    throw ArgumentError("unknown functional '" + name + "'");
}

double evaluate(const FunctionalSpec& f, const Behavior& b)
{
    switch (f.kind) {
    case FunctionalKind::Chsh:
        return chsh(b);
    case FunctionalKind::Mermin:
        return mermin(b);
    case FunctionalKind::Cglmp:
        return cglmp(b, f.d);
    }
    return 0.0;
}

std::vector<VariableSpec> party_inputs(int parties, int settings)
{
    if (parties < 1 || parties > 4)
        throw ArgumentError("between 1 and 4 parties supported");
    std::vector<VariableSpec> v;
    for (int i = 0; i < parties; ++i)
        v.push_back({kInputNames[i], settings});
    return v;
}

std::vector<VariableSpec> party_outputs(int parties, int outcomes)
{
    if (parties < 1 || parties > 4)
        throw ArgumentError("between 1 and 4 parties supported");
    std::vector<VariableSpec> v;
    for (int i = 0; i < parties; ++i)
        v.push_back({kOutputNames[i], outcomes});
    return v;
}

Behavior deterministic_behavior(const DeterministicStrategy& s, int settings, int outcomes)
{
    const int parties = static_cast<int>(s.responses.size());
    auto ins = party_inputs(parties, settings);
    auto outs = party_outputs(parties, outcomes);
    const std::size_t n_in = cells(ins);
    const std::size_t n_out = cells(outs);
    std::vector<double> table(n_in * n_out, 0.0);
    for (std::size_t x = 0; x < n_in; ++x) {
        const auto xv = unravel(x, ins);
        std::vector<int> a(xv.size());
        for (std::size_t i = 0; i < xv.size(); ++i) {
            if (s.responses[i].size() != static_cast<std::size_t>(settings))
                throw ArgumentError("strategy is not total on the inputs");
            a[i] = s.responses[i][static_cast<std::size_t>(xv[i])];
            if (a[i] < 0 || a[i] >= outcomes)
                throw ArgumentError("strategy output out of range");
        }
        table[x * n_out + ravel(a, outs)] = 1.0;
    }
    return Behavior(std::move(ins), std::move(outs), std::move(table));
}

std::vector<DeterministicStrategy> enumerate_strategies(int parties, int settings, int outcomes)
{
    const std::size_t digits = static_cast<std::size_t>(parties * settings);
    double count = std::pow(static_cast<double>(outcomes), static_cast<double>(digits));
    if (count > static_cast<double>(kMaxOracleStrategies))
        throw CapacityError("too many deterministic strategies to enumerate");
    std::vector<DeterministicStrategy> out;
    std::vector<int> d(digits, 0);
    for (std::size_t k = 0; k < static_cast<std::size_t>(count); ++k) {
        DeterministicStrategy s;
        for (int p = 0; p < parties; ++p)
            s.responses.emplace_back(d.begin() + p * settings, d.begin() + (p + 1) * settings);
        out.push_back(std::move(s));
        for (std::size_t i = digits; i-- > 0;) {
            if (++d[i] < outcomes)
                break;
            d[i] = 0;
        }
    }
    return out;
}

OracleMax max_over_deterministic(const FunctionalSpec& f)
{
    if (f.kind == FunctionalKind::Cglmp && (f.d < 2 || f.d > 4))
        throw CapacityError("CGLMP oracle supports 2 <= d <= 4");
    const auto strategies = enumerate_strategies(f.parties(), 2, f.outcomes());
    OracleMax best;
    best.value = -std::numeric_limits<double>::infinity();
    for (const auto& s : strategies) {
        const double v = evaluate(f, deterministic_behavior(s, 2, f.outcomes()));
        if (v > best.value) {
            best.value = v;
            best.argmax = s;
        }
    }
    best.strategies = strategies.size();
    return best;
}

void MdModel::validate() const
{
    if (inputs.size() != outputs.size() || inputs.empty())
        throw ArgumentError("model needs one input and one output per party");
    if (p_lambda.empty() || p_inputs_given_lambda.size() != p_lambda.size() || strategies.size() != p_lambda.size())
        throw ArgumentError("model tables disagree on the number of lambda values");
    const std::size_t n_in = cells(inputs);
    double total = 0.0;
    for (std::size_t l = 0; l < p_lambda.size(); ++l) {
        if (p_lambda[l] < 0.0)
            throw ArgumentError("negative p(lambda)");
        total += p_lambda[l];
        const auto& row = p_inputs_given_lambda[l];
        if (row.size() != n_in)
            throw ArgumentError("p(inputs | lambda) row has the wrong length");
        double s = 0.0;
        for (double p : row) {
            if (p < 0.0)
                throw ArgumentError("negative p(inputs | lambda)");
            s += p;
        }
        if (std::abs(s - 1.0) > 1e-9)
            throw ArgumentError("p(inputs | lambda=" + std::to_string(l) + ") sums to " + std::to_string(s));
        const auto& st = strategies[l];
        if (st.responses.size() != inputs.size())
            throw ArgumentError("strategy has the wrong number of parties");
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            if (st.responses[i].size() != static_cast<std::size_t>(inputs[i].cardinality))
                throw ArgumentError("strategy is not total on the inputs");
            for (int a : st.responses[i])
                if (a < 0 || a >= outputs[i].cardinality)
                    throw ArgumentError("strategy output out of range");
        }
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ArgumentError("p(lambda) does not sum to 1");
}

ModelBehavior behavior_of(const MdModel& model)
{
    model.validate();
    const std::size_t n_in = cells(model.inputs);
    const std::size_t n_out = cells(model.outputs);
    const std::size_t L = model.lambdas();
    std::vector<double> table(n_in * n_out, 0.0);
    std::vector<double> px(n_in, 0.0);
    std::vector<double> joint(n_in * L, 0.0);
    for (std::size_t x = 0; x < n_in; ++x) {
        const auto xv = unravel(x, model.inputs);
        for (std::size_t l = 0; l < L; ++l) {
            const double w = model.p_lambda[l] * model.p_inputs_given_lambda[l][x];
            joint[x * L + l] = w;
            px[x] += w;
            table[x * n_out + output_cell(model, l, xv)] += w;
        }
    }
    for (std::size_t x = 0; x < n_in; ++x) {
        for (std::size_t a = 0; a < n_out; ++a)
            table[x * n_out + a] = px[x] > 0.0 ? table[x * n_out + a] / px[x] : 1.0 / static_cast<double>(n_out);
    }
    std::vector<VariableSpec> jv = model.inputs;
    jv.push_back({"Lambda", static_cast<int>(L)});
    return {Behavior(model.inputs, model.outputs, std::move(table), std::move(px)),
            Distribution(std::move(jv), std::move(joint))};
}

double model_mutual_information(const MdModel& model)
{
    const auto mb = behavior_of(model);
    VarSet ins;
    for (const auto& v : model.inputs)
        ins.push_back(v.name);
    return mutual_information(mb.inputs_lambda, ins, {"Lambda"});
}

ExactBehavior exact_behavior_of(const MdModel& model)
{
    model.validate();
    const std::size_t n_in = cells(model.inputs);
    const std::size_t n_out = cells(model.outputs);
    ExactBehavior b{model.inputs, model.outputs, std::vector<Rational>(n_in * n_out, Rational(0))};
    for (std::size_t x = 0; x < n_in; ++x) {
        const auto xv = unravel(x, model.inputs);
        Rational px(0);
        for (std::size_t l = 0; l < model.lambdas(); ++l) {
            const Rational w =
                rational_from_double(model.p_lambda[l]) * rational_from_double(model.p_inputs_given_lambda[l][x]);
            px += w;
            b.table[x * n_out + output_cell(model, l, xv)] += w;
        }
        for (std::size_t a = 0; a < n_out; ++a) {
            if (px == 0)
                b.table[x * n_out + a] = Rational(1, static_cast<unsigned long>(n_out));
            else
                b.table[x * n_out + a] /= px;
        }
    }
    return b;
}

Rational exact_correlator(const ExactBehavior& b, const std::vector<int>& inputs)
{
    for (const auto& v : b.outputs)
        if (v.cardinality != 2)
            throw ArgumentError("correlators need binary outputs");
    const std::size_t x = ravel(inputs, b.inputs);
    const std::size_t n_out = cells(b.outputs);
    Rational e(0);
    for (std::size_t a = 0; a < n_out; ++a) {
        const auto av = unravel(a, b.outputs);
        int parity = 0;
        for (int bit : av)
            parity ^= bit;
        if (parity)
            e -= b.table[x * n_out + a];
        else
            e += b.table[x * n_out + a];
    }
    return e;
}

bool exact_no_signaling(const ExactBehavior& b)
{
    const std::size_t k = b.inputs.size();
    const std::size_t n_in = cells(b.inputs);
    const std::size_t n_out = cells(b.outputs);
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << k); ++mask) {
        std::map<std::pair<std::vector<int>, std::vector<int>>, Rational> seen;
        for (std::size_t x = 0; x < n_in; ++x) {
            const auto xv = unravel(x, b.inputs);
            std::map<std::vector<int>, Rational> marg;
            for (std::size_t a = 0; a < n_out; ++a) {
                const auto av = unravel(a, b.outputs);
                std::vector<int> key;
                for (std::size_t i = 0; i < k; ++i)
                    if (mask >> i & 1)
                        key.push_back(av[i]);
                marg[key] += b.table[x * n_out + a];
            }
            std::vector<int> xs;
            for (std::size_t i = 0; i < k; ++i)
                if (mask >> i & 1)
                    xs.push_back(xv[i]);
            for (const auto& [key, value] : marg) {
                auto [it, inserted] = seen.emplace(std::make_pair(xs, key), value);
                if (!inserted && it->second != value)
                    return false;
            }
        }
    }
    return true;
}

MdModel mermin_optimal_md_model(double m, MerminMode mode)
{
    if (!(m >= 2.0 - 1e-12 && m <= 4.0 + 1e-12))
        throw ArgumentError("Mermin target must lie in [2, 4]");
    m = std::clamp(m, 2.0, 4.0);
    const double p = (4.0 - m) / 8.0;

    MdModel model;
    model.inputs = party_inputs(3);
    model.outputs = party_outputs(3, 2);
    const auto triples = enumerate_strategies(3, 2, 2);
    for (int mu = 0; mu < 2; ++mu) {
        for (int eta = 0; eta < 2; ++eta) {
            for (int nu = 0; nu < 2; ++nu) {
                const int special[3] = {eta ^ nu ^ 1, mu ^ nu ^ 1, mu ^ eta ^ 1};
                std::vector<double> row(8);
                for (std::size_t cell = 0; cell < 8; ++cell) {
                    const int x = static_cast<int>(cell >> 2 & 1);
                    const int y = static_cast<int>(cell >> 1 & 1);
                    const int z = static_cast<int>(cell & 1);
                    const bool odd = (x + y + z) % 2 == 1;
                    const bool is_special = x == special[0] && y == special[1] && z == special[2];
                    if (mode == MerminMode::Uniform8)
                        row[cell] = !odd ? 1.0 / 8.0 : is_special ? p / 2.0 : (1.0 - p) / 6.0;
                    else
                        row[cell] = !odd ? 0.0 : is_special ? p : (1.0 - p) / 3.0;
                }
                double s = 0.0;
                for (double v : row)
                    s += v;
                if (std::abs(s - 1.0) > 1e-9)
                    throw Error("input conditional of class (" + std::to_string(mu) + std::to_string(eta) +
                                std::to_string(nu) + ") sums to " + std::to_string(s));

                const int sign_bit = (mu * eta + mu * nu + eta * nu) & 1;
                const DeterministicStrategy* chosen = nullptr;
                for (const auto& t : triples) {
                    const auto& r = t.responses;
                    if ((r[0][1] ^ r[0][0]) == mu && (r[1][1] ^ r[1][0]) == eta && (r[2][1] ^ r[2][0]) == nu &&
                        (r[0][0] ^ r[1][0] ^ r[2][0]) == sign_bit) {
                        chosen = &t;
                        break;
                    }
                }
                if (!chosen)
                    throw Error("no deterministic strategy in the class");
                model.p_lambda.push_back(1.0 / 8.0);
                model.p_inputs_given_lambda.push_back(std::move(row));
                DeterministicStrategy st = *chosen;
                st.lambda = model.strategies.size();
                model.strategies.push_back(std::move(st));
            }
        }
    }
    model.validate();
    return model;
}

MdModel nosignaling_lift(const MdModel& model)
{
    model.validate();
    if (model.inputs.size() != 3)
        throw ArgumentError("the lift needs a three-party model");
    for (std::size_t i = 0; i < 3; ++i)
        if (model.inputs[i].cardinality != 2 || model.outputs[i].cardinality != 2)
            throw ArgumentError("the lift needs binary inputs and outputs");
    MdModel out;
    out.inputs = model.inputs;
    out.outputs = model.outputs;
    for (std::size_t l = 0; l < model.lambdas(); ++l) {
        for (int l1 = 0; l1 < 2; ++l1) {
            for (int l2 = 0; l2 < 2; ++l2) {
                out.p_lambda.push_back(model.p_lambda[l] / 4.0);
                out.p_inputs_given_lambda.push_back(model.p_inputs_given_lambda[l]);
                DeterministicStrategy s = model.strategies[l];
                for (int x = 0; x < 2; ++x) {
                    s.responses[0][static_cast<std::size_t>(x)] ^= l1;
                    s.responses[1][static_cast<std::size_t>(x)] ^= l1 ^ l2;
                    s.responses[2][static_cast<std::size_t>(x)] ^= l2;
                }
                s.lambda = out.strategies.size();
                out.strategies.push_back(std::move(s));
            }
        }
    }
    return out;
}

MdModel random_md_model(int parties, std::size_t lambdas, std::uint64_t seed)
{
    if (lambdas == 0)
        throw ArgumentError("need at least one lambda value");
    Rng rng(seed);
    MdModel m;
    m.inputs = party_inputs(parties);
    m.outputs = party_outputs(parties, 2);
    const std::size_t n_in = cells(m.inputs);
    m.p_lambda = rng.simplex(lambdas);
    for (std::size_t l = 0; l < lambdas; ++l) {
        m.p_inputs_given_lambda.push_back(rng.simplex(n_in));
        DeterministicStrategy s;
        for (int p = 0; p < parties; ++p)
            s.responses.push_back({static_cast<int>(rng.bits() & 1), static_cast<int>(rng.bits() & 1)});
        s.lambda = l;
        m.strategies.push_back(std::move(s));
    }
    return m;
}

Distribution sample_causal_model(const Dag& dag, const SampleOptions& options, std::uint64_t seed)
{
    for (const auto& [name, c] : options.cardinalities)
        if (!dag.has(name))
            throw NameError("no node named '" + name + "'");
    const auto& nodes = dag.nodes();
    const std::size_t n = nodes.size();
    std::vector<VariableSpec> vars;
    for (const auto& node : nodes) {
        auto it = options.cardinalities.find(node.name);
        const int c = it == options.cardinalities.end() ? 2 : it->second;
        if (c < 1)
            throw ArgumentError("cardinality of '" + node.name + "' must be positive");
        if (c > 8)
            throw CapacityError("cardinality of '" + node.name + "' exceeds 8");
        vars.push_back({node.name, c});
    }
    double total = 1.0;
    for (const auto& v : vars)
        total *= v.cardinality;
    if (total > static_cast<double>(kMaxSampleCells))
        throw CapacityError("joint table too large to sample");

    Rng rng(seed);
    std::vector<std::vector<std::size_t>> parents(n);
    std::vector<std::vector<double>> cpt(n); // [parent config * card + value]
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& p : dag.parents(nodes[i].name))
            parents[i].push_back(dag.index_of(p));
        std::size_t configs = 1;
        for (std::size_t p : parents[i])
            configs *= static_cast<std::size_t>(vars[p].cardinality);
        const auto card = static_cast<std::size_t>(vars[i].cardinality);
        const bool det = options.deterministic_response && !nodes[i].latent && !parents[i].empty();
        for (std::size_t c = 0; c < configs; ++c) {
            if (det) {
                std::vector<double> row(card, 0.0);
                row[rng.index(card)] = 1.0;
                cpt[i].insert(cpt[i].end(), row.begin(), row.end());
            } else {
                const auto row = rng.simplex(card);
                cpt[i].insert(cpt[i].end(), row.begin(), row.end());
            }
        }
    }

    const auto cells_total = static_cast<std::size_t>(total);
    std::vector<double> table(cells_total);
    std::vector<int> a(n, 0);
    for (std::size_t flat = 0; flat < cells_total; ++flat) {
        double p = 1.0;
        for (std::size_t i = 0; i < n && p != 0.0; ++i) {
            std::size_t cfg = 0;
            for (std::size_t q : parents[i])
                cfg = cfg * static_cast<std::size_t>(vars[q].cardinality) + static_cast<std::size_t>(a[q]);
            p *= cpt[i][cfg * static_cast<std::size_t>(vars[i].cardinality) + static_cast<std::size_t>(a[i])];
        }
        table[flat] = p;
        for (std::size_t i = n; i-- > 0;) {
            if (++a[i] < vars[i].cardinality)
                break;
            a[i] = 0;
        }
    }
    Distribution full(vars, std::move(table));
    if (options.include_latent)
        return full;
    return marginal(full, dag.observed());
}

namespace {

// Uniform inputs over n cells, one lambda per strategy; g[l][c] is the
// functional's contribution of cell c when that cell follows strategy l.
struct FrontierProblem {
    FunctionalSpec spec;
    std::size_t n = 0;
    std::vector<DeterministicStrategy> strategies;
    std::vector<std::vector<double>> g;
    std::size_t classical = 0;      // strategy with the largest total
    std::size_t anticlassical = 0;  // and the smallest
    std::vector<std::size_t> best;  // per cell maximizer
    double v_classical = 0.0;
    double v_min = 0.0;
    double v_max = 0.0;

    std::size_t lambdas() const { return strategies.size(); }
};

FrontierProblem make_problem(const FunctionalSpec& spec)
{
    if (spec.kind == FunctionalKind::Cglmp)
        throw ArgumentError("frontier search supports chsh and mermin");
    FrontierProblem pr;
    pr.spec = spec;
    const int parties = spec.parties();
    pr.strategies = enumerate_strategies(parties, 2, 2);
    const auto ins = party_inputs(parties);
    const auto outs = party_outputs(parties, 2);
    pr.n = cells(ins);
    const std::size_t n_out = cells(outs);
    pr.g.assign(pr.lambdas(), std::vector<double>(pr.n, 0.0));
    for (std::size_t l = 0; l < pr.lambdas(); ++l) {
        const auto det = deterministic_behavior(pr.strategies[l], 2, 2);
        for (std::size_t c = 0; c < pr.n; ++c) {
            std::vector<double> t(pr.n * n_out, 1.0 / static_cast<double>(n_out));
            for (std::size_t a = 0; a < n_out; ++a)
                t[c * n_out + a] = det.prob_flat(a, c);
            pr.g[l][c] = evaluate(spec, Behavior(ins, outs, std::move(t)));
        }
    }
    double hi = -1e300;
    double lo = 1e300;
    for (std::size_t l = 0; l < pr.lambdas(); ++l) {
        double s = 0.0;
        for (double v : pr.g[l])
            s += v;
        if (s > hi) {
            hi = s;
            pr.classical = l;
        }
        if (s < lo) {
            lo = s;
            pr.anticlassical = l;
        }
    }
    pr.v_classical = hi;
    pr.v_min = lo;
    pr.best.assign(pr.n, 0);
    for (std::size_t c = 0; c < pr.n; ++c) {
        for (std::size_t l = 1; l < pr.lambdas(); ++l)
            if (pr.g[l][c] > pr.g[pr.best[c]][c])
                pr.best[c] = l;
        pr.v_max += pr.g[pr.best[c]][c];
    }
    return pr;
}

using CondTable = std::vector<std::vector<double>>; // [cell][lambda] = p(lambda | cell)

double table_value(const FrontierProblem& pr, const CondTable& p)
{
    double v = 0.0;
    for (std::size_t c = 0; c < pr.n; ++c)
        for (std::size_t l = 0; l < pr.lambdas(); ++l)
            v += p[c][l] * pr.g[l][c];
    return v;
}

double table_mi(const FrontierProblem& pr, const CondTable& p)
{
    const double pc = 1.0 / static_cast<double>(pr.n);
    std::vector<double> pl(pr.lambdas(), 0.0);
    for (std::size_t c = 0; c < pr.n; ++c)
        for (std::size_t l = 0; l < pr.lambdas(); ++l)
            pl[l] += pc * p[c][l];
    double mi = 0.0;
    for (std::size_t c = 0; c < pr.n; ++c)
        for (std::size_t l = 0; l < pr.lambdas(); ++l)
            if (p[c][l] > 0.0)
                mi += pc * p[c][l] * std::log2(p[c][l] / pl[l]);
    return std::max(0.0, mi);
}

CondTable single_lambda(const FrontierProblem& pr, std::size_t l)
{
    CondTable t(pr.n, std::vector<double>(pr.lambdas(), 0.0));
    for (auto& row : t)
        row[l] = 1.0;
    return t;
}

CondTable dependent_table(const FrontierProblem& pr)
{
    CondTable t(pr.n, std::vector<double>(pr.lambdas(), 0.0));
    for (std::size_t c = 0; c < pr.n; ++c)
        t[c][pr.best[c]] = 1.0;
    return t;
}

CondTable mix(const CondTable& a, const CondTable& b, double w)
{
    CondTable out = a;
    for (std::size_t c = 0; c < a.size(); ++c)
        for (std::size_t l = 0; l < a[c].size(); ++l)
            out[c][l] = (1.0 - w) * a[c][l] + w * b[c][l];
    return out;
}

// Mixes p with the classical or the fully dependent table so the value is `target`.
CondTable hit_target(const FrontierProblem& pr, const CondTable& p, double target, const CondTable& low,
                     const CondTable& high)
{
    const double v = table_value(pr, p);
    if (std::abs(v - target) <= 1e-12)
        return p;
    if (v >= target) {
        const double span = v - pr.v_classical;
        return span <= 0.0 ? p : mix(p, low, std::clamp((v - target) / span, 0.0, 1.0));
    }
    const double span = pr.v_max - v;
    return span <= 0.0 ? p : mix(p, high, std::clamp((target - v) / span, 0.0, 1.0));
}

CondTable softmax(const std::vector<std::vector<double>>& logits)
{
    CondTable t = logits;
    for (auto& row : t) {
        const double mx = *std::max_element(row.begin(), row.end());
        double s = 0.0;
        for (auto& v : row) {
            v = std::exp(v - mx);
            s += v;
        }
        for (auto& v : row)
            v /= s;
    }
    return t;
}

MdModel model_from_table(const FrontierProblem& pr, const CondTable& p)
{
    MdModel m;
    m.inputs = party_inputs(pr.spec.parties());
    m.outputs = party_outputs(pr.spec.parties(), 2);
    const double pc = 1.0 / static_cast<double>(pr.n);
    for (std::size_t l = 0; l < pr.lambdas(); ++l) {
        double pl = 0.0;
        for (std::size_t c = 0; c < pr.n; ++c)
            pl += pc * p[c][l];
        std::vector<double> row(pr.n, pc);
        if (pl > 0.0)
            for (std::size_t c = 0; c < pr.n; ++c)
                row[c] = pc * p[c][l] / pl;
        m.p_lambda.push_back(pl);
        m.p_inputs_given_lambda.push_back(std::move(row));
        DeterministicStrategy s = pr.strategies[l];
        s.lambda = l;
        m.strategies.push_back(std::move(s));
    }
    return m;
}

std::size_t strategy_index(const FrontierProblem& pr, const DeterministicStrategy& s)
{
    for (std::size_t l = 0; l < pr.lambdas(); ++l)
        if (pr.strategies[l].responses == s.responses)
            return l;
    throw Error("strategy not found");
}

} // namespace

FrontierResult md_frontier_search(const FunctionalSpec& target, double value, std::size_t budget, std::uint64_t seed)
{
    const FrontierProblem pr = make_problem(target);
    if (value > pr.v_max + 1e-12 || value < pr.v_min - 1e-12)
        throw ArgumentError("target value outside the attainable range");
    FrontierResult res;

    if (value <= pr.v_classical) {
        // mixing the extreme strategies independently of the inputs
        const double w = pr.v_classical == pr.v_min ? 0.0 : (pr.v_classical - value) / (pr.v_classical - pr.v_min);
        const CondTable t = mix(single_lambda(pr, pr.classical), single_lambda(pr, pr.anticlassical), w);
        res.best_mi = 0.0;
        res.model = model_from_table(pr, t);
        res.achieved_value = table_value(pr, t);
        res.evaluations = 1;
        return res;
    }

    const CondTable low = single_lambda(pr, pr.classical);
    const CondTable high = dependent_table(pr);
    Rng rng(seed);

    std::vector<std::vector<double>> logits(pr.n, std::vector<double>(pr.lambdas(), 0.0));
    if (target.kind == FunctionalKind::Mermin) {
        const MdModel seed_model = mermin_optimal_md_model(std::min(value, 4.0), MerminMode::Uniform8);
        CondTable t(pr.n, std::vector<double>(pr.lambdas(), 0.0));
        for (std::size_t k = 0; k < seed_model.lambdas(); ++k) {
            const std::size_t l = strategy_index(pr, seed_model.strategies[k]);
            for (std::size_t c = 0; c < pr.n; ++c)
                t[c][l] += seed_model.p_lambda[k] * seed_model.p_inputs_given_lambda[k][c] * static_cast<double>(pr.n);
        }
        for (std::size_t c = 0; c < pr.n; ++c)
            for (std::size_t l = 0; l < pr.lambdas(); ++l)
                logits[c][l] = std::log(t[c][l] + 1e-300);
        for (auto& row : logits)
            for (auto& v : row)
                v = std::max(v, -40.0);
    } else {
        // start near the strategies that attain the classical bound
        for (std::size_t l = 0; l < pr.lambdas(); ++l) {
            double s = 0.0;
            for (double v : pr.g[l])
                s += v;
            const double base = s >= pr.v_classical - 1e-12 ? 0.0 : -6.0;
            for (std::size_t c = 0; c < pr.n; ++c)
                logits[c][l] = base + 0.1 * rng.normal();
        }
    }

    auto objective = [&](const std::vector<std::vector<double>>& lg, CondTable* out) {
        CondTable t = hit_target(pr, softmax(lg), value, low, high);
        const double mi = table_mi(pr, t);
        if (out)
            *out = std::move(t);
        return mi;
    };

    CondTable best_table;
    double current = objective(logits, &best_table);
    double best = current;
    std::size_t evals = 1;
    const double t0 = 1e-2;
    const double t1 = 1e-7;
    for (; evals < budget; ++evals) {
        const double frac = static_cast<double>(evals) / static_cast<double>(budget);
        const double temp = t0 * std::pow(t1 / t0, frac);
        const double step = 1.0 * (1.0 - frac) + 0.05;
        const std::size_t c = rng.index(pr.n);
        const std::size_t l = rng.index(pr.lambdas());
        const double old = logits[c][l];
        logits[c][l] += step * rng.normal();
        CondTable t;
        const double cand = objective(logits, &t);
        if (cand <= current || rng.uniform() < std::exp(-(cand - current) / temp)) {
            current = cand;
            if (cand < best) {
                best = cand;
                best_table = std::move(t);
            }
        } else {
            logits[c][l] = old;
        }
    }
    res.best_mi = best;
    res.model = model_from_table(pr, best_table);
    res.achieved_value = table_value(pr, best_table);
    res.evaluations = evals;
    return res;
}

} // namespace mdnet
