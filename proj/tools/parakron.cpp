#include "parakron/census.hpp"
#include "parakron/errors.hpp"
#include "parakron/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace parakron;

namespace {

enum Exit
{
    ok = 0,
    usage = 1,
    validation = 2,
    budget_exceeded = 3,
    violation = 4
};

struct Input
{
    std::string path, hash;
    Json json;
};

Input read_input(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    Input out{path, fnv1a_hex(ss.str()), {}};
    try {
        out.json = Json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
    return out;
}

struct Options
{
    std::string field;
    std::optional<int> n, m;
    std::uint64_t budget = default_budget();
    std::string output;
};

std::optional<Field> field_override(const Options& o)
{
    if (o.field.empty())
        return std::nullopt;
    return Field::parse(o.field);
}

ParabolicSheafP1 read_sheaf(const Input& in, const Options& o)
{
    return parabolic_from_json(in.json, field_override(o));
}

FilteredKroneckerModule read_module(const Input& in, const Options& o)
{
    return filtered_from_json(in.json, field_override(o));
}

std::vector<ParabolicSheafP1> read_corpus(const Input& in, const Options& o)
{
    std::vector<ParabolicSheafP1> out;
    if (in.json.is_object() && !in.json.contains("members")) {
        out.push_back(parabolic_from_json(in.json, field_override(o)));
        return out;
    }
    const Json& members = in.json.is_array() ? in.json : in.json.at("members");
    for (const auto& j : members)
        out.push_back(parabolic_from_json(j, field_override(o)));
    return out;
}

// Without -n, n is the largest step regularity; m defaults to n + 2, or the threshold choice.
FunctorContext context_for(const std::vector<ParabolicSheafP1>& corpus, const Options& o, bool thresholds)
{
    if (!o.n && !o.m && thresholds)
        return threshold_context(corpus, 40, o.budget);
    FunctorContext base = default_context(corpus);
    int n = o.n.value_or(base.n);
    return FunctorContext::make(base.field, n, o.m.value_or(n + 2));
}

FunctorContext context_for_module(const FilteredKroneckerModule& m, const Options& o)
{
    if (!o.n)
        throw ValidationError("-n is required for modules; m defaults to n + h - 1");
    int mm = o.m.value_or(*o.n + static_cast<int>(m.h) - 1);
    return FunctorContext::make(m.field, *o.n, mm);
}

Json report(const std::string& command, const std::vector<const Input*>& inputs)
{
    Json in = Json::object();
    for (const Input* i : inputs)
        in[i->path] = i->hash;
    return Json{{"command", command}, {"inputs", in}};
}

Json form_matrix_json(const FormMatrix& fm)
{
    Json rows = Json::array();
    for (const auto& r : fm) {
        Json row = Json::array();
        for (const auto& g : r)
            row.push_back(to_json(g));
        rows.push_back(row);
    }
    return rows;
}

Json destabilizer_json(const Destabilizer& d)
{
    return Json{{"source", d.sub.source.splitting()},
                {"map", form_matrix_json(d.sub.map)},
                {"par_mu", to_string(d.par_mu)},
                {"induced", to_json(d.induced)}};
}

std::string verdict(bool semistable, bool stable)
{
    return stable ? "stable" : (semistable ? "semistable" : "unstable");
}

Json type_json(const ParabolicType& tp)
{
    Json pi = Json::array();
    for (const auto& p : tp.Pi)
        pi.push_back(p.str());
    return Json{{"P", tp.P.str()}, {"P_i", pi}, {"weights", to_json(tp.weights)}};
}

int cmd_inspect(const Input& in, const Options& o, Json& out)
{
    if (in.json.contains("splitting")) {
        auto ps = read_sheaf(in, o);
        out["kind"] = "parabolic sheaf";
        out["sheaf"] = ps.sheaf.str();
        out["rank"] = ps.rank();
        out["delta"] = ps.delta();
        out["ell"] = ps.ell();
        out["step_regularity"] = step_regularity(ps);
        Json steps = Json::array();
        for (int i = 1; i <= ps.ell() + 1; ++i)
            steps.push_back(step_splitting(ps, i).str());
        out["steps"] = steps;
        out["type"] = type_json(type_of(ps));
        return ok;
    }
    auto m = read_module(in, o);
    auto rep = validate(m);
    out["kind"] = m.ell == 1 && m.modules[1].d1 + m.modules[1].d2 == 0 ? "Kronecker module" : "filtered module";
    out["dims"] = m.dims();
    out["h"] = m.h;
    out["valid"] = rep.valid;
    out["injective"] = rep.injective;
    out["failures"] = rep.failures;
    if (m.weights)
        out["mu"] = to_json(mu(m));
    return ok;
}

int cmd_par_invariants(const Input& in, const Options& o, Json& out)
{
    auto ps = read_sheaf(in, o);
    auto ph = par_hilbert(ps);
    bool agree = true;
    Json variants = Json::array();
    for (const auto& v : ph.variants) {
        variants.push_back(v.str());
        agree = agree && v == ph.value;
    }
    auto pd = par_degree_slope(ps);
    out["par_hilbert"] = ph.value.str();
    out["variants"] = variants;
    out["variants_agree"] = agree;
    out["par_deg"] = to_string(pd.par_deg);
    out["par_mu"] = to_string(pd.par_mu);
    out["type"] = type_json(type_of(ps));
    return agree ? ok : violation;
}

int cmd_par_stability(const Input& in, const Options& o, Json& out)
{
    auto ps = read_sheaf(in, o);
    auto r = par_semistable_oracle(ps, o.budget);
    out["verdict"] = verdict(r.semistable, r.stable);
    out["semistable"] = r.semistable;
    out["stable_over_base_field"] = r.stable;
    out["par_mu"] = to_string(r.par_mu);
    out["candidates"] = r.candidates;
    if (r.witness)
        out["witness"] = destabilizer_json(*r.witness);
    if (r.equal_slope)
        out["equal_slope"] = destabilizer_json(*r.equal_slope);
    return ok;
}

int cmd_par_gr(const Input& in, const Options& o, Json& out)
{
    auto ps = read_sheaf(in, o);
    Json factors = Json::array();
    for (const auto& f : par_gr(ps, false, o.budget))
        factors.push_back(to_json(f));
    out["factors"] = factors;
    return ok;
}

int cmd_psi(const Input& in, const Options& o, Json& out)
{
    auto ps = read_sheaf(in, o);
    auto ctx = context_for({ps}, o, false);
    auto m = psi(ps, ctx);
    out["context"] = to_json(ctx);
    out["dims"] = m.dims();
    if (!o.output.empty()) {
        std::ofstream f(o.output);
        f << to_json(m).dump(2) << "\n";
        if (!f)
            throw ValidationError("cannot write " + o.output);
        out["output"] = o.output;
    } else {
        out["module"] = to_json(m);
    }
    return ok;
}

int cmd_phi_dual(const Input& in, const Options& o, Json& out)
{
    auto m = read_module(in, o);
    auto ctx = context_for_module(m, o);
    out["context"] = to_json(ctx);
    if (m.ell == 1 && m.modules[1].d1 + m.modules[1].d2 == 0 || !m.weights) {
        auto u = unit_check(m.modules[0], ctx);
        out["sheaf"] = u.sheaf ? Json(to_json(*u.sheaf)) : Json(nullptr);
        out["unit_iso"] = u.iso;
        out["details"] = u.details;
        if (!u.sheaf)
            throw NotLocallyFreeError(u.details);
        return ok;
    }
    out["parabolic_sheaf"] = to_json(psi_dual(m, ctx));
    return ok;
}

int cmd_roundtrip(const Input& in, const Options& o, Json& out)
{
    auto ps = read_sheaf(in, o);
    auto ctx = context_for({ps}, o, false);
    auto m = psi(ps, ctx);
    bool units = true;
    for (const auto& k : m.modules)
        units = units && unit_check(k, ctx).iso;
    auto back = psi_dual(m, ctx);
    bool same = back == ps;
    bool phi_back = phi_dual(phi(ps.sheaf, ctx), ctx) == ps.sheaf;
    out["context"] = to_json(ctx);
    out["units_iso"] = units;
    out["phi_roundtrip"] = phi_back;
    out["psi_roundtrip"] = same;
    return units && same && phi_back ? ok : violation;
}

StabilityMode mode_of(bool tight_only, bool exhaustive, bool both)
{
    if (int(tight_only) + int(exhaustive) + int(both) > 1)
        throw CLI::ValidationError("choose one of --tight-only, --exhaustive, --both");
    return exhaustive ? StabilityMode::exhaustive : (both ? StabilityMode::both : StabilityMode::tight);
}

int cmd_mod_stability(const Input& in, const Options& o, StabilityMode mode, Json& out)
{
    auto m = read_module(in, o);
    auto r = is_theta_semistable(m, StabilityOptions{mode, o.budget, false});
    out["verdict"] = verdict(r.semistable, r.stable);
    out["semistable"] = r.semistable;
    out["stable_over_base_field"] = r.stable;
    out["mu"] = to_json(r.mu);
    out["degenerate"] = r.degenerate;
    out["max_sub_mu"] = to_json(r.max_mu);
    out["examined"] = r.examined;
    if (r.witness) {
        out["witness"] = to_json(*r.witness);
        out["witness_mu"] = to_json(r.witness_mu);
        out["witness_theta"] = to_json(theta(m, *r.witness));
    }
    return ok;
}

Json jh_json(const JordanHolder& jh)
{
    Json filt = Json::array(), factors = Json::array();
    for (const auto& s : jh.filtration)
        filt.push_back(s.dims());
    for (const auto& f : jh.factors)
        factors.push_back(to_json(f));
    return Json{{"filtration_dims", filt}, {"factors", factors}};
}

int cmd_jh(const Input& in, const Options& o, Json& out)
{
    auto m = read_module(in, o);
    out["jordan_holder"] = jh_json(jordan_holder(m, o.budget));
    return ok;
}

int cmd_sequiv(const Input& a, const Input& b, const Options& o, Json& out)
{
    auto ma = read_module(a, o), mb = read_module(b, o);
    out["s_equivalent"] = s_equivalent(ma, mb, o.budget);
    return ok;
}

int cmd_verify(const Input& in, const Options& o, bool no_gr, Json& out)
{
    auto ps = read_sheaf(in, o);
    auto ctx = context_for({ps}, o, true);
    auto th = thresholds_check({ps}, type_of(ps), ctx, o.budget);
    auto r = verify_preservation(ps, ctx, PreservationOptions{o.budget, true, !no_gr});
    out["context"] = to_json(ctx);
    out["thresholds"] = to_json(th);
    out["sheaf_verdict"] = verdict(r.sheaf_semistable, r.sheaf_stable);
    out["module_verdict"] = verdict(r.module_semistable, r.module_stable);
    out["verdict"] = out["sheaf_verdict"].get<std::string>() + "/" + out["module_verdict"].get<std::string>();
    out["par_mu"] = to_string(r.par_mu);
    out["module_mu"] = to_json(r.module_mu);
    if (r.sheaf_witness_mu)
        out["sheaf_witness_mu"] = to_string(*r.sheaf_witness_mu);
    if (r.module_witness_mu)
        out["module_witness_mu"] = to_json(*r.module_witness_mu);
    if (r.psi_of_witness_mu)
        out["psi_of_sheaf_witness_mu"] = to_json(*r.psi_of_witness_mu);
    out["gr_checked"] = r.gr_checked;
    out["gr_match"] = r.gr_match;
    out["agree"] = r.agree();
    if (!r.agree()) {
        out["counterexample"] = Json{{"sheaf", to_json(ps)}, {"module", to_json(psi(ps, ctx))}};
        return violation;
    }
    return ok;
}

int cmd_thresholds(const Input& in, const Options& o, Json& out)
{
    auto corpus = read_corpus(in, o);
    if (corpus.empty()) {
        if (!o.n)
            throw ValidationError("an empty corpus needs -n and -m");
        auto ctx = FunctorContext::make(field_override(o).value_or(Field::prime(2)), *o.n, o.m.value_or(*o.n + 2));
        out["context"] = to_json(ctx);
        out["report"] = to_json(thresholds_check({}, ParabolicType{}, ctx, o.budget));
        return ok;
    }
    auto ctx = context_for(corpus, o, true);
    auto rep = thresholds_check(corpus, type_of(corpus.front()), ctx, o.budget);
    out["context"] = to_json(ctx);
    out["members"] = corpus.size();
    out["report"] = to_json(rep);
    return ok;
}

std::vector<std::size_t> parse_dimvec(const std::string& s)
{
    auto colon = s.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--dimvec", "expected tops:bottoms, e.g. 2,1,1:3,2,1");
    auto list = [](const std::string& part) {
        std::vector<std::size_t> v;
        std::stringstream ss(part);
        std::string item;
        while (std::getline(ss, item, ','))
            v.push_back(static_cast<std::size_t>(std::stoul(item)));
        return v;
    };
    auto tops = list(s.substr(0, colon)), bottoms = list(s.substr(colon + 1));
    if (tops.size() != bottoms.size())
        throw CLI::ValidationError("--dimvec", "tops and bottoms need the same number of levels");
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i < tops.size(); ++i) {
        dims.push_back(tops[i]);
        dims.push_back(bottoms[i]);
    }
    return dims;
}

Json census_json(const CensusResult& r)
{
    Json classes = Json::array();
    for (const auto& c : r.classes) {
        Json fdims = Json::array();
        for (const auto& f : c.factors)
            fdims.push_back(f.dims());
        classes.push_back(Json{{"size", c.size},
                               {"fingerprint", c.fingerprint},
                               {"factor_dims", fdims},
                               {"representative", to_json(c.representative)}});
    }
    return Json{{"field", r.field.name()}, {"dims", r.dims},           {"weights", to_json(r.weights)},
                {"h", r.h},                 {"mode", r.sampled ? "sampled" : "exhaustive"},
                {"seed", r.seed},           {"enumerated", r.enumerated}, {"semistable", r.semistable},
                {"class_count", r.classes.size()}, {"classes", classes}};
}

int cmd_census(const Options& o, const std::string& weights, const std::string& dimvec, std::size_t h,
               std::optional<std::uint64_t> samples, std::uint64_t seed, const std::string& psi_corpus, Json& out)
{
    if (!psi_corpus.empty()) {
        Input in = read_input(psi_corpus);
        out["inputs"][in.path] = in.hash;
        auto corpus = read_corpus(in, o);
        if (corpus.empty())
            throw ValidationError("empty corpus");
        auto ctx = context_for(corpus, o, true);
        std::vector<FilteredKroneckerModule> mods;
        std::vector<ParabolicSheafP1> ss;
        for (const auto& ps : corpus) {
            mods.push_back(psi(ps, ctx));
            if (par_semistable_oracle(ps, o.budget).semistable)
                ss.push_back(ps);
        }
        auto r = census_of(mods, o.budget);
        auto sc = sheaf_classes(ss, o.budget);
        std::size_t sheaf_count = sc.empty() ? 0 : *std::max_element(sc.begin(), sc.end()) + 1;
        out["context"] = to_json(ctx);
        out["census"] = census_json(r);
        out["sheaf_class_count"] = sheaf_count;
        out["counts_agree"] = sheaf_count == r.classes.size();
        return sheaf_count == r.classes.size() ? ok : violation;
    }
    if (o.field.empty() || weights.empty() || dimvec.empty())
        throw CLI::ValidationError("census needs --field, --weights and --dimvec (or --psi-corpus)");
    std::vector<std::string> parts;
    std::stringstream ss(weights);
    std::string item;
    Json w = Json::array();
    while (std::getline(ss, item, ','))
        w.push_back(item);
    auto r = census(Field::parse(o.field), parse_dimvec(dimvec), weights_from_json(w),
                    CensusOptions{h, o.budget, samples, seed});
    out["census"] = census_json(r);
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"parakron: parabolic sheaves on the projective line and filtered Kronecker modules"};
    app.require_subcommand(0, 1);
    Options o;
    bool schema = false;
    app.add_flag("--schema", schema, "print the file formats and exit");

    std::string file, file_b, weights, dimvec, psi_corpus;
    std::size_t h = 2;
    std::optional<std::uint64_t> samples;
    std::uint64_t seed = 0;
    bool tight_only = false, exhaustive = false, both = false, no_gr = false;

    auto common = [&](CLI::App* sub, bool with_file) {
        if (with_file)
            sub->add_option("file", file, "input JSON")->required()->check(CLI::ExistingFile);
        sub->add_option("--field", o.field, "field override, e.g. F5");
        sub->add_option("-n", o.n, "twist n");
        sub->add_option("-m", o.m, "twist m");
        sub->add_option("--budget", o.budget, "enumeration budget (default PARAKRON_BUDGET or 3000)");
    };
    auto* inspect = app.add_subcommand("inspect", "summary of a sheaf or module file");
    auto* par_inv = app.add_subcommand("par-invariants", "parabolic Hilbert polynomial, degree and slope");
    auto* par_st = app.add_subcommand("par-stability", "parabolic semistability by subsheaf enumeration");
    auto* par_gr_cmd = app.add_subcommand("par-gr", "graded object of a semistable parabolic sheaf");
    auto* psi_cmd = app.add_subcommand("psi", "filtered Kronecker module of a parabolic sheaf");
    auto* phid = app.add_subcommand("phi-dual", "sheaf or parabolic sheaf of a module");
    auto* rt = app.add_subcommand("roundtrip", "psi followed by its inverse");
    auto* mst = app.add_subcommand("mod-stability", "theta-semistability of a filtered module");
    auto* jh = app.add_subcommand("jh", "Jordan-Holder filtration of a semistable module");
    auto* seq = app.add_subcommand("sequiv", "S-equivalence of two semistable modules");
    auto* ver = app.add_subcommand("verify-preservation", "sheaf and module stability verdicts side by side");
    auto* thr = app.add_subcommand("thresholds", "conditions on (n, m) over a corpus");
    auto* cen = app.add_subcommand("census", "S-equivalence classes of semistable modules");
    for (auto* s : {inspect, par_inv, par_st, par_gr_cmd, psi_cmd, phid, rt, mst, jh, ver, thr})
        common(s, true);
    common(seq, false);
    seq->add_option("a", file, "first module")->required()->check(CLI::ExistingFile);
    seq->add_option("b", file_b, "second module")->required()->check(CLI::ExistingFile);
    common(cen, false);
    psi_cmd->add_option("-o,--output", o.output, "write the module here");
    mst->add_flag("--tight-only", tight_only, "sweep subspaces of the top vertex only (default)");
    mst->add_flag("--exhaustive", exhaustive, "enumerate subrepresentations");
    mst->add_flag("--both", both, "run both and cross-check");
    ver->add_flag("--no-gr", no_gr, "skip the graded comparison on strictly semistable input");
    cen->add_option("--weights", weights, "comma-separated weights, e.g. 1/4,1/2");
    cen->add_option("--dimvec", dimvec, "tops:bottoms, e.g. 2,1,1:3,2,1");
    cen->add_option("--hdim", h, "dimension of the multiplicity space");
    cen->add_option("--samples", samples, "sample this many modules instead of the whole slice");
    cen->add_option("--seed", seed, "seed for sampling");
    cen->add_option("--psi-corpus", psi_corpus, "partition Psi images of a corpus and compare with the sheaf side");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : usage;
    }
    if (schema) {
        std::cout << schema_text();
        return ok;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return usage;
    }
    CLI::App* sub = app.get_subcommands().front();
    std::string name = sub->get_name();
    auto start = std::chrono::steady_clock::now();
    int code = ok;
    Json out;
    try {
        if (name == "census") {
            out = report(name, {});
            code = cmd_census(o, weights, dimvec, h, samples, seed, psi_corpus, out);
        } else if (name == "sequiv") {
            Input a = read_input(file), b = read_input(file_b);
            out = report(name, {&a, &b});
            code = cmd_sequiv(a, b, o, out);
        } else {
            Input in = read_input(file);
            out = report(name, {&in});
            if (name == "inspect")
                code = cmd_inspect(in, o, out);
            else if (name == "par-invariants")
                code = cmd_par_invariants(in, o, out);
            else if (name == "par-stability")
                code = cmd_par_stability(in, o, out);
            else if (name == "par-gr")
                code = cmd_par_gr(in, o, out);
            else if (name == "psi")
                code = cmd_psi(in, o, out);
            else if (name == "phi-dual")
                code = cmd_phi_dual(in, o, out);
            else if (name == "roundtrip")
                code = cmd_roundtrip(in, o, out);
            else if (name == "mod-stability")
                code = cmd_mod_stability(in, o, mode_of(tight_only, exhaustive, both), out);
            else if (name == "jh")
                code = cmd_jh(in, o, out);
            else if (name == "verify-preservation")
                code = cmd_verify(in, o, no_gr, out);
            else
                code = cmd_thresholds(in, o, out);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "parakron " << name << ": " << e.what() << "\n";
        return usage;
    } catch (const ValidationError& e) {
        std::cerr << "parakron " << name << ": " << e.what() << "\n";
        return validation;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "parakron " << name << ": " << e.what() << "\n";
        return validation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "parakron " << name << ": " << e.what() << "\n";
        return validation;
    } catch (const BudgetError& e) {
        std::cerr << "parakron " << name << ": " << e.what() << "\n";
        return budget_exceeded;
    } catch (const InvariantFailure& e) {
        std::cerr << "parakron " << name << ": " << e.what() << "\n";
        out["invariant_failure"] = e.what();
        std::cout << out.dump(2) << "\n";
        return violation;
    }
    std::cout << out.dump(2) << "\n";
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "parakron " << name << ": " << secs << " s\n";
    return code;
}
