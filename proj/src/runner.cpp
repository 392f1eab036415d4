#include "bbfs/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

namespace bbfs {

namespace {

Box parse_box(const ConfigValue& v, int n) {
    const auto& items = v.list();
    Box b;
    b.n = n;
    if (n == 1) {
        if (items.size() != 2)
            throw ConfigValidationError("grid box for n=1 must be [lo, hi]");
        b.lo[0] = items[0].number();
        b.hi[0] = items[1].number();
    } else {
        if (items.size() != 4)
            throw ConfigValidationError("grid box for n=2 must be [lox, hix, loy, hiy]");
        b.lo[0] = items[0].number();
        b.hi[0] = items[1].number();
        b.lo[1] = items[2].number();
        b.hi[1] = items[3].number();
    }
    return b;
}

WeightSpec parse_weight(const ConfigNode& node) {
    std::string kind = node.string_or("kind", "constant");
    if (kind == "constant") return WeightSpec::constant(node.number_or("value", 1.0));
    if (kind == "power") return WeightSpec::power(node.at("alpha").number());
    if (kind == "cappedPower" || kind == "capped_power")
        return WeightSpec::capped_power(node.at("alpha").number());
    if (kind == "expr") return WeightSpec::custom(Expression::parse(node.at("expr").str()));
    if (kind == "piecewise") {
        std::vector<std::pair<Box, double>> pieces;
        const ConfigNode* ps = node.block_or_null("pieces");
        if (ps) {
            for (const auto& [key, val] : ps->entries) {
                const ConfigNode& pb = val.block();
                const auto& bounds = pb.at("box").list();
                Box box;
                box.n = bounds.size() >= 4 ? 2 : 1;
                box.lo[0] = bounds[0].number();
                box.hi[0] = bounds[1].number();
                if (box.n == 2) {
                    box.lo[1] = bounds[2].number();
                    box.hi[1] = bounds[3].number();
                }
                pieces.emplace_back(box, pb.at("value").number());
            }
        }
        return WeightSpec::piecewise(std::move(pieces), node.number_or("fallback", 1.0));
    }
    throw ConfigValidationError("unknown weight kind '" + kind + "'");
}

const WeightSpec& resolve_weight(const std::map<std::string, WeightSpec>& weights,
                                 const std::string& name) {
    auto it = weights.find(name);
    if (it == weights.end())
        throw ConfigValidationError("unknown weight '" + name + "'");
    return it->second;
}

ExponentFunction parse_exponent(const ConfigValue& v) {
    if (v.is_number()) return ExponentFunction::constant(v.number());
    return ExponentFunction::from_expression(Expression::parse(v.str()));
}

SpaceSpec parse_space(const ConfigNode& node,
                      const std::map<std::string, WeightSpec>& weights,
                      const std::map<std::string, SpaceSpec>& spaces) {
    std::string tag = node.at("tag").str();
    auto weight_of = [&](const std::string& key, double fallback_const) {
        if (node.has(key)) return resolve_weight(weights, node.at(key).str());
        return WeightSpec::constant(fallback_const);
    };
    if (tag == "WeightedLebesgue")
        return SpaceSpec::weighted_lebesgue(node.at("p").number(),
                                            weight_of("weight", 1.0));
    if (tag == "Lorentz")
        return SpaceSpec::lorentz(node.at("p").number(), node.at("q").number());
    if (tag == "Herz")
        return SpaceSpec::herz(node.at("alpha").number(), node.at("p").number(),
                               node.at("q").number(),
                               node.bool_or("homogeneous", true));
    if (tag == "VarLebesgue")
        return SpaceSpec::var_lebesgue(parse_exponent(node.at("p")),
                                       weight_of("weight", 1.0));
    if (tag == "VarHerz")
        return SpaceSpec::var_herz(parse_exponent(node.at("alpha")),
                                   parse_exponent(node.at("p")),
                                   parse_exponent(node.at("q")), weight_of("v", 1.0),
                                   weight_of("w", 1.0),
                                   node.bool_or("homogeneous", true));
    if (tag == "Orlicz") {
        if (node.has("p"))
            return SpaceSpec::orlicz(YoungFunction::power(node.at("p").number()));
        return SpaceSpec::orlicz(
            YoungFunction::from_expression(Expression::parse(node.at("phi").str())));
    }
    if (tag == "Morrey")
        return SpaceSpec::morrey(node.at("r0").number(), node.at("r").number());
    if (tag == "BBM")
        return SpaceSpec::bbm(node.at("p").number(), node.at("q").number(),
                              node.at("r").number(), node.at("tau").number());
    if (tag == "Convexified") {
        std::string base = node.at("base").str();
        auto it = spaces.find(base);
        if (it == spaces.end())
            throw ConfigValidationError("unknown base space '" + base + "'");
        return SpaceSpec::convexified(it->second, node.at("ppow").number());
    }
    throw ConfigValidationError("unknown space tag '" + tag + "'");
}

WaveletFamily parse_family(const std::string& s) {
    if (s == "haar") return WaveletFamily::haar;
    if (s == "db2") return WaveletFamily::db2;
    if (s == "db3") return WaveletFamily::db3;
    if (s == "db4") return WaveletFamily::db4;
    throw ConfigValidationError("unknown wavelet family '" + s + "'");
}

std::vector<ProbeDesc> parse_battery(const ConfigNode& node, const Box& box,
                                     std::uint64_t seed, const std::string& name) {
    BatteryOptions bo;
    bo.count = static_cast<int>(node.number_or("count", 16));
    bo.middle_half = node.bool_or("middle_half", true);
    bo.nonnegative = node.bool_or("nonnegative", false);
    std::string kind = node.string_or("kind", "mixed");
    SeededRng rng = SeededRng(seed).fork("battery|" + name);
    if (kind == "mixed") return battery_mixed(box, bo, rng);
    if (kind == "smooth") return battery_smooth(box, bo, rng);
    if (kind == "indicators") return battery_indicators(box, bo, rng);
    if (kind == "translated") return battery_translated_indicators(box, bo.count);
    throw ConfigValidationError("unknown battery kind '" + kind + "'");
}

}  // namespace

Experiment build_experiment(const ConfigNode& cfg) {
    Experiment exp;
    exp.suite_name = cfg.string_or("suite", "bbfs");
    if (!cfg.has("seed"))
        throw ConfigValidationError("config must provide a seed (reproducibility)");
    exp.harness.seed = static_cast<std::uint64_t>(cfg.at("seed").number());
    exp.workers = static_cast<int>(cfg.number_or("workers", 1));

    std::string norm = cfg.string_or("normalization", "measure");
    if (norm == "measure")
        exp.harness.max_opts.normalization = MaxNormalization::measure;
    else if (norm == "paper")
        exp.harness.max_opts.normalization = MaxNormalization::paper;
    else
        throw ConfigValidationError("normalization must be 'measure' or 'paper'");

    const ConfigNode* gridn = cfg.block_or_null("grid");
    if (!gridn) throw ConfigValidationError("missing grid block");
    int n = static_cast<int>(gridn->number_or("n", 1));
    int L = static_cast<int>(gridn->number_or("L", 6));
    auto max_cells = static_cast<std::int64_t>(
        gridn->number_or("max_cells", static_cast<double>(kDefaultMaxCells)));
    exp.grid = Grid::make(n, parse_box(gridn->at("box"), n), L, max_cells);

    if (const ConfigNode* ws = cfg.block_or_null("weights"))
        for (const auto& [name, val] : ws->entries)
            exp.weights.emplace(name, parse_weight(val.block()));
    if (exp.weights.find("unit") == exp.weights.end())
        exp.weights.emplace("unit", WeightSpec::constant(1.0));

    if (const ConfigNode* ss = cfg.block_or_null("spaces")) {
        for (const auto& [name, val] : ss->entries) {
            SpaceSpec spec = parse_space(val.block(), exp.weights, exp.spaces);
            spec.name = name;
            exp.spaces.emplace(name, std::move(spec));
        }
    }

    {
        const ConfigNode* wn = cfg.block_or_null("wavelet");
        std::string family = wn ? wn->string_or("family", "haar") : "haar";
        int J = wn ? static_cast<int>(wn->number_or("J", 0)) : 0;
        int cascade_default = std::max(10, L - J + 2);
        int cascade =
            wn ? static_cast<int>(wn->number_or("cascade", cascade_default))
               : cascade_default;
        exp.system = WaveletSystem::build(parse_family(family), n, J, cascade);
    }

    if (const ConfigNode* tn = cfg.block_or_null("tolerances")) {
        exp.harness.slack_tol = tn->number_or("slack", exp.harness.slack_tol);
        exp.harness.norm_opts.lux_tol = tn->number_or("lux", exp.harness.norm_opts.lux_tol);
        exp.harness.equivalence_budget =
            tn->number_or("equivalence_budget", exp.harness.equivalence_budget);
        exp.harness.drift_budget = tn->number_or("drift", exp.harness.drift_budget);
        exp.harness.convergence_tol =
            tn->number_or("convergence", exp.harness.convergence_tol);
    }
    if (const ConfigNode* hn = cfg.block_or_null("harness")) {
        exp.harness.alpha_override = hn->number_or("alpha", 0.0);
        exp.harness.beta_override = hn->number_or("beta", 0.0);
        exp.harness.rubio_l_max =
            static_cast<int>(hn->number_or("rubio_l_max", exp.harness.rubio_l_max));
        exp.harness.rubio_tol = hn->number_or("rubio_tol", exp.harness.rubio_tol);
        exp.harness.norm_safety = hn->number_or("norm_safety", exp.harness.norm_safety);
        exp.harness.young_eps = hn->number_or("young_eps", exp.harness.young_eps);
    }

    if (const ConfigNode* bs = cfg.block_or_null("batteries"))
        for (const auto& [name, val] : bs->entries)
            exp.batteries.emplace(
                name, parse_battery(val.block(), exp.grid.box(), exp.harness.seed, name));
    if (exp.batteries.find("std") == exp.batteries.end()) {
        ConfigNode dflt;
        exp.batteries.emplace("std",
                              parse_battery(dflt, exp.grid.box(), exp.harness.seed, "std"));
    }

    if (const ConfigNode* cs = cfg.block_or_null("checks")) {
        for (const auto& [id, val] : cs->entries) {
            Experiment::CheckRequest req;
            req.id = id;
            req.params = val.block();
            req.kind = req.params.string_or("kind", "");
            if (req.kind.empty())
                throw ConfigValidationError("check '" + id + "' is missing a kind");
            static const std::vector<std::string> kKinds{
                "axioms",      "extrapolation", "proof_chain", "wavelet_equivalence",
                "convergence", "vector_valued", "riesz_boundedness"};
            if (std::find(kKinds.begin(), kKinds.end(), req.kind) == kKinds.end())
                throw ConfigValidationError("check '" + id + "': unknown kind '" +
                                            req.kind + "'");
            if (!req.params.has("space"))
                throw ConfigValidationError("check '" + id + "' needs a space");
            // resolve names now so bad references fail validation, not the run
            if (req.params.has("space")) {
                std::string s = req.params.at("space").str();
                if (exp.spaces.find(s) == exp.spaces.end())
                    throw ConfigValidationError("check '" + id + "': unknown space '" +
                                                s + "'");
            }
            if (req.params.has("battery")) {
                std::string b = req.params.at("battery").str();
                if (exp.batteries.find(b) == exp.batteries.end())
                    throw ConfigValidationError("check '" + id + "': unknown battery '" +
                                                b + "'");
            }
            exp.checks.push_back(std::move(req));
        }
    }

    // effective config with defaults made explicit
    ConfigNode eff;
    eff.set_string("suite", exp.suite_name);
    eff.set_number("seed", static_cast<double>(exp.harness.seed));
    eff.set_number("workers", exp.workers);
    eff.set_string("normalization", norm);
    {
        ConfigNode& gb = eff.add_block("grid");
        gb.set_number("n", n);
        std::vector<ConfigValue> bounds;
        for (int a = 0; a < n; ++a) {
            bounds.push_back(ConfigValue{exp.grid.box().lo[a]});
            bounds.push_back(ConfigValue{exp.grid.box().hi[a]});
        }
        gb.entries.emplace_back("box", ConfigValue{std::move(bounds)});
        gb.set_number("L", L);
        gb.set_number("max_cells", static_cast<double>(max_cells));
    }
    if (const ConfigNode* b = cfg.block_or_null("weights"))
        eff.entries.emplace_back("weights",
                                 ConfigValue{std::make_shared<ConfigNode>(*b)});
    if (const ConfigNode* b = cfg.block_or_null("spaces"))
        eff.entries.emplace_back("spaces", ConfigValue{std::make_shared<ConfigNode>(*b)});
    {
        ConfigNode& wb = eff.add_block("wavelet");
        wb.set_string("family", to_string(exp.system.family()));
        wb.set_number("J", exp.system.base_level());
        wb.set_number("cascade", exp.system.cascade_level());
    }
    {
        ConfigNode& tb = eff.add_block("tolerances");
        tb.set_number("slack", exp.harness.slack_tol);
        tb.set_number("lux", exp.harness.norm_opts.lux_tol);
        tb.set_number("equivalence_budget", exp.harness.equivalence_budget);
        tb.set_number("drift", exp.harness.drift_budget);
        tb.set_number("convergence", exp.harness.convergence_tol);
    }
    {
        ConfigNode& hb = eff.add_block("harness");
        hb.set_number("alpha", exp.harness.alpha_override);
        hb.set_number("beta", exp.harness.beta_override);
        hb.set_number("rubio_l_max", exp.harness.rubio_l_max);
        hb.set_number("rubio_tol", exp.harness.rubio_tol);
        hb.set_number("norm_safety", exp.harness.norm_safety);
        hb.set_number("young_eps", exp.harness.young_eps);
    }
    if (const ConfigNode* b = cfg.block_or_null("batteries"))
        eff.entries.emplace_back("batteries",
                                 ConfigValue{std::make_shared<ConfigNode>(*b)});
    if (const ConfigNode* b = cfg.block_or_null("checks"))
        eff.entries.emplace_back("checks", ConfigValue{std::make_shared<ConfigNode>(*b)});
    if (const ConfigNode* b = cfg.block_or_null("output"))
        eff.entries.emplace_back("output", ConfigValue{std::make_shared<ConfigNode>(*b)});
    exp.effective = std::move(eff);
    return exp;
}

namespace {

VerificationReport run_one_check(const Experiment& exp,
                                 const Experiment::CheckRequest& req) {
    const HarnessOptions& ctx = exp.harness;
    const Grid& g = exp.grid;
    auto space_of = [&](const std::string& fallback = "") -> const SpaceSpec& {
        std::string name =
            req.params.has("space") ? req.params.at("space").str() : fallback;
        auto it = exp.spaces.find(name);
        if (it == exp.spaces.end())
            throw ConfigValidationError("check '" + req.id + "': unknown space '" +
                                        name + "'");
        return it->second;
    };
    auto battery_of = [&]() -> const std::vector<ProbeDesc>& {
        std::string name = req.params.string_or("battery", "std");
        auto it = exp.batteries.find(name);
        if (it == exp.batteries.end())
            throw ConfigValidationError("check '" + req.id + "': unknown battery '" +
                                        name + "'");
        return it->second;
    };

    VerificationReport rep;
    if (req.kind == "axioms") {
        const SpaceSpec& X = space_of();
        auto probes = materialize_all(battery_of(), g);
        std::vector<Region> balls;
        Point mid{0.0, 0.0};
        for (int a = 0; a < g.dim(); ++a) mid[a] = 0.5 * (g.box().lo[a] + g.box().hi[a]);
        const double R = g.box().diameter();
        balls.push_back(BallRegion{mid, R / 8.0, false});
        balls.push_back(BallRegion{mid, R / 4.0, false});
        balls.push_back(BallRegion{mid, R / 2.0, false});
        AxiomsReport ar =
            axioms_check(X, probes, balls, req.params.number_or("tol", 1e-6),
                         ctx.norm_opts);
        rep.check = "axioms";
        rep.description = X.describe();
        rep.pass = ar.pass;
        for (const auto& e : ar.entries) {
            CheckEntry ce;
            ce.id = e.id;
            ce.pass = e.pass;
            ce.values["worst"] = e.worst;
            ce.note = e.note;
            rep.add(std::move(ce));
        }
    } else if (req.kind == "extrapolation") {
        PairFamily fam;
        std::string fk = req.params.string_or("family", "maximal");
        if (fk == "maximal") fam.kind = PairFamily::Kind::maximal_pairs;
        else if (fk == "riesz") fam.kind = PairFamily::Kind::riesz_pairs;
        else if (fk == "wavelet") fam.kind = PairFamily::Kind::wavelet_pairs;
        else if (fk == "dominated") fam.kind = PairFamily::Kind::dominated_pairs;
        else throw ConfigValidationError("unknown pair family '" + fk + "'");
        fam.p = req.params.number_or("p", 2.0);
        fam.s = req.params.number_or("s", 0.0);
        fam.system = &exp.system;
        rep = extrapolation_check(fam, space_of(), battery_of(), g, ctx);
    } else if (req.kind == "proof_chain") {
        SeededRng rng = SeededRng(ctx.seed).fork("proof|" + req.id);
        BatteryOptions bo;
        bo.count = 3;
        bo.nonnegative = true;
        bo.middle_half = false;
        auto parts = battery_smooth(g.box(), bo, rng);
        GridFunction f = parts[0].materialize(g);
        GridFunction gg = GridFunction::zip(f, parts[1].materialize(g),
                                            [](double a, double b) {
                                                return 0.5 * std::abs(a) + std::abs(b);
                                            });
        GridFunction h = parts[2].materialize(g);
        rep = proof_chain_check(f, gg, h, req.params.number_or("p", 2.0), space_of(),
                                ctx);
    } else if (req.kind == "wavelet_equivalence") {
        rep = wavelet_equivalence_check(space_of(), req.params.number_or("s", 0.0),
                                        exp.system, battery_of(), g, ctx);
    } else if (req.kind == "convergence") {
        auto probes = materialize_all(battery_of(), g);
        auto index = static_cast<std::size_t>(req.params.number_or("index", 0));
        if (index >= probes.size())
            throw ConfigValidationError("check '" + req.id + "': probe index range");
        std::vector<int> schedule;
        int J = exp.system.base_level();
        for (int j = J; j < g.level() - 1; j += 2) schedule.push_back(j);
        schedule.push_back(g.level() - 1);
        rep = convergence_check(space_of(), exp.system, probes[index], schedule, ctx);
    } else if (req.kind == "vector_valued") {
        auto probes = materialize_all(battery_of(), g);
        rep = vector_valued_check(space_of(), probes, req.params.number_or("r", 2.0),
                                  ctx);
    } else if (req.kind == "riesz_boundedness") {
        rep = riesz_boundedness_check(space_of(), battery_of(), g, ctx);
    } else {
        throw ConfigValidationError("check '" + req.id + "': unknown kind '" +
                                    req.kind + "'");
    }
    rep.check = req.id;
    nlohmann::ordered_json snap;
    snap["kind"] = req.kind;
    snap["grid"] = {{"n", g.dim()},
                    {"L", g.level()},
                    {"box", {g.box().lo[0], g.box().hi[0], g.box().lo[1], g.box().hi[1]}}};
    snap["seed"] = ctx.seed;
    snap["normalization"] =
        ctx.max_opts.normalization == MaxNormalization::measure ? "measure" : "paper";
    for (const auto& [k, v] : req.params.entries) {
        if (v.is_number())
            snap["params"][k] = v.number();
        else if (v.is_string())
            snap["params"][k] = v.str();
    }
    rep.config = std::move(snap);
    return rep;
}

}  // namespace

namespace {

// a throwing check becomes a failed report; the rest of the run proceeds
VerificationReport run_one_check_guarded(const Experiment& exp,
                                         const Experiment::CheckRequest& req) {
    try {
        return run_one_check(exp, req);
    } catch (const std::exception& e) {
        VerificationReport rep;
        rep.check = req.id;
        rep.description = req.kind;
        rep.pass = false;
        CheckEntry entry;
        entry.id = "error";
        entry.pass = false;
        entry.note = e.what();
        rep.add(std::move(entry));
        return rep;
    }
}

}  // namespace

RunResult run_experiment(const Experiment& exp) {
    RunResult res;
    res.reports.resize(exp.checks.size());
    if (exp.workers > 1) {
        std::vector<std::future<VerificationReport>> futs;
        futs.reserve(exp.checks.size());
        for (const auto& req : exp.checks)
            futs.push_back(std::async(std::launch::async, [&exp, &req] {
                return run_one_check_guarded(exp, req);
            }));
        for (std::size_t i = 0; i < futs.size(); ++i) res.reports[i] = futs[i].get();
    } else {
        for (std::size_t i = 0; i < exp.checks.size(); ++i)
            res.reports[i] = run_one_check_guarded(exp, exp.checks[i]);
    }

    for (const auto& r : res.reports)
        if (r.asserted && !r.pass) res.pass = false;
    res.exit_code = res.pass ? 0 : 1;

    nlohmann::ordered_json meta;
    meta["suite"] = exp.suite_name;
    meta["seed"] = exp.harness.seed;
    meta["grid"] = {{"n", exp.grid.dim()}, {"L", exp.grid.level()}};
    meta["wavelet"] = to_string(exp.system.family());
    meta["checks"] = exp.checks.size();
    res.json_text = reports_json(res.reports, meta).dump(2) + "\n";
    res.table_text = reports_text_table(res.reports);
    res.csv_text = reports_plot_csv(res.reports);
    res.effective_config = exp.effective.serialize();
    return res;
}

OutputPaths output_paths(const ConfigNode& cfg, const std::string& env_default_dir) {
    OutputPaths p;
    p.dir = env_default_dir;
    if (const ConfigNode* ob = cfg.block_or_null("output")) {
        p.dir = ob->string_or("dir", p.dir);
        p.json_file = ob->string_or("json", p.json_file);
        p.text_file = ob->string_or("text", p.text_file);
        p.csv_file = ob->string_or("csv", p.csv_file);
        p.effective_file = ob->string_or("effective", p.effective_file);
    }
    return p;
}

void write_outputs(const RunResult& result, const OutputPaths& paths) {
    namespace fs = std::filesystem;
    fs::path dir = paths.dir.empty() ? fs::path(".") : fs::path(paths.dir);
    fs::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& text) {
        if (name.empty()) return;
        std::ofstream os(dir / name, std::ios::binary);
        os << text;
    };
    write(paths.json_file, result.json_text);
    write(paths.text_file, result.table_text);
    write(paths.csv_file, result.csv_text);
    write(paths.effective_file, result.effective_config);
}

std::string list_spaces_text() {
    std::ostringstream os;
    os << "WeightedLebesgue  p weight            (1 <= p < inf)\n"
       << "Lorentz           p q                 (1 <= p < inf, 1 <= q <= inf)\n"
       << "Herz              alpha p q homogeneous\n"
       << "VarLebesgue       p(expr) weight      (0 < p- <= p+ < inf)\n"
       << "VarHerz           alpha(expr) p(expr) q(expr) v w homogeneous\n"
       << "Orlicz            phi(expr in t) | p  (Young function)\n"
       << "Morrey            r0 r                (1 <= r <= r0 < inf)\n"
       << "BBM               p q r tau           (1 <= q <= p < inf; r, tau in [1, inf])\n"
       << "Convexified       base ppow           (p-convexification of a named space)\n";
    return os.str();
}

std::string list_checks_text() {
    std::ostringstream os;
    os << "extrapolation        family space battery [p] [s]\n"
       << "proof_chain          space [p]\n"
       << "wavelet_equivalence  space battery [s]\n"
       << "convergence          space battery [index]\n"
       << "vector_valued        space battery [r]\n"
       << "riesz_boundedness    space battery\n"
       << "axioms               space battery [tol]   (spaces-level (P1)-(P5) battery)\n";
    return os.str();
}

}  // namespace bbfs
