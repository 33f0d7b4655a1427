#include <dicycle/dicycle.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace dicycle;
using Json = nlohmann::ordered_json;

// Raised for bad user input that CLI11 cannot see (files, combinations of flags).
class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error("UsageError", what) {}
};

std::uint64_t fnv1a(const std::string& bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    std::ostringstream s;
    s << std::hex;
    s.width(16);
    s.fill('0');
    s << v;
    return s.str();
}

struct Manifest {
    std::vector<std::string> argv;
    std::vector<std::uint64_t> seeds;
    Json files = Json::array();
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    std::size_t threads = 1;

    void file(const std::string& role, const std::string& path, const std::string& bytes)
    {
        files.push_back({{"role", role}, {"path", path}, {"fnv1a64", hex64(fnv1a(bytes))}, {"bytes", bytes.size()}});
    }

    Json json() const
    {
        return {{"command_line", argv},
                {"seeds", seeds},
                {"version", version},
                {"threads", threads},
                {"files", files},
                {"wall_time_seconds",
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
    }
};

Manifest manifest;

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open \"" + path + "\"");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const std::string& path, const std::string& bytes, const std::string& role)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write \"" + path + "\"");
    out << bytes;
    manifest.file(role, path, bytes);
}

OrientedGraph load_graph(const std::string& path)
{
    const std::string text = slurp(path);
    manifest.file("input", path, text);
    return read_graph(text);
}

std::string big(const BigInt& v) { return to_decimal(v); }
std::string rat(const Rational& r) { return to_fraction_string(r); }

Json arc_json(Arc a) { return Json::array({a.tail, a.head}); }

int emit(Json report, bool ok = true)
{
    report["manifest"] = manifest.json();
    std::cout << report.dump(2) << "\n";
    return ok ? 0 : 1;
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<std::uint64_t> parse_uints(const std::string& s)
{
    std::vector<std::uint64_t> out;
    for (const auto& tok : split_list(s)) {
        const auto v = dicycle::detail::parse_uint(tok);
        if (!v) throw UsageError("\"" + tok + "\" is not a non-negative integer");
        out.push_back(*v);
    }
    return out;
}

Mode parse_mode(const std::string& s)
{
    if (s == "oriented") return Mode::oriented;
    if (s == "directed") return Mode::directed;
    throw UsageError("mode must be \"oriented\" or \"directed\"");
}

// ---------------------------------------------------------------------------
// construction ids

struct IdOptions {
    std::string kind;
    std::optional<double> param;
    std::string threshold_arcs = "cycle";
    std::string placement = "adjacent";
    std::string mode = "oriented";
};

void add_id_options(CLI::App* cmd, IdOptions& o, bool required)
{
    auto* opt = cmd->add_option("--construction", o.kind, "construction id");
    if (required) opt->required();
    cmd->add_option("--param", o.param, "d (balanced), k (sparse singleton), t (c3_3t) or c (threshold)");
    cmd->add_option("--threshold-arcs", o.threshold_arcs, "cycle, chords or all (threshold_c7)");
    cmd->add_option("--placement", o.placement, "adjacent or opposite (c5c7)");
    cmd->add_option("--construction-mode", o.mode, "oriented or directed (balanced_cycle_blowup)");
}

ConstructionId make_id(const IdOptions& o)
{
    ConstructionId id = ConstructionId::of(construction_kind_from_string(o.kind));
    id.threshold_arcs = threshold_arcs_from_string(o.threshold_arcs);
    if (o.placement != "adjacent" && o.placement != "opposite") throw UsageError("placement must be adjacent or opposite");
    id.placement = o.placement == "adjacent" ? LargeBlobPlacement::adjacent : LargeBlobPlacement::opposite;
    id.mode = parse_mode(o.mode);
    if (o.param) {
        const double p = *o.param;
        auto integral = [&]() {
            if (p < 0 || p != static_cast<double>(static_cast<std::size_t>(p)))
                throw UsageError("--param must be a non-negative integer for " + o.kind);
            return static_cast<std::size_t>(p);
        };
        switch (id.kind) {
        case ConstructionKind::balanced_cycle_blowup: id.d = integral(); break;
        case ConstructionKind::sparse_singleton_blowup: id.k = integral(); break;
        case ConstructionKind::c3_3t_sparse: id.t = integral(); break;
        case ConstructionKind::threshold_c7: id.c = p; break;
        default: throw UsageError(o.kind + " takes no --param");
        }
    }
    if (id.kind == ConstructionKind::balanced_cycle_blowup && id.d == 2) id.mode = Mode::directed;
    id.validate();
    return id;
}

Json id_json(const ConstructionId& id)
{
    Json j{{"kind", std::string(to_string(id.kind))}};
    switch (id.kind) {
    case ConstructionKind::balanced_cycle_blowup:
        j["d"] = id.d;
        j["mode"] = std::string(to_string(id.mode));
        break;
    case ConstructionKind::sparse_singleton_blowup: j["k"] = id.k; break;
    case ConstructionKind::c3_3t_sparse: j["t"] = id.t; break;
    case ConstructionKind::threshold_c7:
        j["c"] = id.c;
        j["threshold_arcs"] = std::string(to_string(id.threshold_arcs));
        break;
    case ConstructionKind::c5c7_bipartite_blobs:
        j["placement"] = id.placement == LargeBlobPlacement::adjacent ? "adjacent" : "opposite";
        break;
    default: break;
    }
    return j;
}

// ---------------------------------------------------------------------------
// pattern files

Rational json_rational(const Json& v)
{
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    throw UsageError("pattern weights and splits must be integers or \"p/q\" strings");
}

// {"base": {"n": 4, "arcs": [[0,1], ...], "mode": "oriented"}, "weights": ["1/4", ...],
//  "internal": ["independent" | "tournament" | {"bipartite": "1/2"}, ...],
//  "rules": ["full" | {"threshold": 0.67}, ...], "fixed_sizes": [0, ...]}
DensityModel read_pattern_file(const std::string& path, std::size_t k)
{
    const std::string text = slurp(path);
    manifest.file("pattern", path, text);
    Json j;
    try {
        j = Json::parse(text);
    } catch (const std::exception& e) {
        throw UsageError("pattern file is not valid JSON: " + std::string(e.what()));
    }
    try {
        const auto& b = j.at("base");
        const std::size_t n = b.at("n").get<std::size_t>();
        std::vector<Arc> arcs;
        for (const auto& a : b.at("arcs")) arcs.push_back({a.at(0).get<Vertex>(), a.at(1).get<Vertex>()});
        const Mode mode = parse_mode(b.value("mode", std::string("oriented")));
        PatternSpec p = PatternSpec::uniform(OrientedGraph(n, arcs, mode));
        if (j.contains("weights")) {
            p.blob_weights.clear();
            for (const auto& w : j["weights"]) p.blob_weights.push_back(json_rational(w));
        }
        if (j.contains("internal")) {
            p.blob_internal.clear();
            for (const auto& in : j["internal"]) {
                if (in == "independent")
                    p.blob_internal.push_back(Independent{});
                else if (in == "tournament")
                    p.blob_internal.push_back(TransitiveTournament{});
                else if (in.is_object() && in.contains("bipartite"))
                    p.blob_internal.push_back(OneWayBipartite{json_rational(in["bipartite"])});
                else
                    throw UsageError("unknown blob internal rule " + in.dump());
            }
        }
        if (j.contains("rules")) {
            const auto& rules = j["rules"];
            if (rules.size() != arcs.size()) throw UsageError("need one rule per listed arc");
            for (std::size_t i = 0; i < arcs.size(); ++i) {
                const auto pos = std::lower_bound(p.base.arcs().begin(), p.base.arcs().end(), arcs[i]) - p.base.arcs().begin();
                const auto& r = rules[i];
                if (r == "full")
                    p.arc_rule[static_cast<std::size_t>(pos)] = FullRule{};
                else if (r.is_object() && r.contains("threshold"))
                    p.arc_rule[static_cast<std::size_t>(pos)] = ThresholdRule{r["threshold"].get<double>()};
                else
                    throw UsageError("unknown arc rule " + r.dump());
            }
        }
        DensityModel m{std::move(p), k, {}};
        if (j.contains("fixed_sizes")) m.fixed_sizes = j["fixed_sizes"].get<std::vector<std::size_t>>();
        m.validate();
        return m;
    } catch (const Json::exception& e) {
        throw UsageError("malformed pattern file: " + std::string(e.what()));
    }
}

// ---------------------------------------------------------------------------
// subcommands

struct Options {
    std::size_t threads = default_thread_count();

    IdOptions gen_id;
    std::size_t gen_n = 0;
    std::uint64_t gen_seed = 0;
    std::optional<std::size_t> gen_k;
    std::string gen_out;

    std::string in;
    std::size_t k = 0;
    std::string paths;
    bool per_arc = false;
    bool per_vertex = false;

    std::string forbid;
    std::optional<std::size_t> neighbor_d;

    std::optional<std::size_t> clear_forbid;
    std::string clear_out;

    std::uint64_t target = 0;
    std::string gens;

    std::size_t l = 0;
    std::size_t n = 0;
    std::string mode = "oriented";

    std::string pattern;
    IdOptions pattern_id;
    std::vector<double> threshold_range;
    std::size_t resolution = 512;
    std::uint64_t mc_samples = 0;
    std::uint64_t seed = 1;

    std::optional<std::size_t> bipartition;

    bool local = false;
    std::uint64_t budget = 100000;
    std::size_t witnesses = 5;

    std::string recipe = "all";
};

int run_gen(const Options& o)
{
    const ConstructionId id = make_id(o.gen_id);
    manifest.seeds = {o.gen_seed};
    const OrientedGraph g = generate(id, o.gen_n, o.gen_seed);
    const std::string text = write_graph(g);
    const std::size_t k = o.gen_k.value_or(id.natural_k());

    Json sidecar{{"construction", id_json(id)}, {"n", o.gen_n}, {"seed", o.gen_seed}, {"vertices", g.order()},
                 {"arcs", g.arc_count()}, {"mode", std::string(to_string(g.mode()))}, {"k", k}};
    try {
        const ClosedForm cf = closed_form_count(id, o.gen_n, k);
        sidecar["closed_form_count"] = {{"value", rat(cf.value)}, {"kind", std::string(to_string(cf.kind))}, {"formula", cf.formula}};
    } catch (const ConstructionError& e) {
        if (e.name() != "NoClosedForm") throw;
        sidecar["closed_form_count"] = nullptr;
    }
    if (o.gen_out.empty()) {
        sidecar["graph"] = text;
    } else {
        spit(o.gen_out, text, "output");
        Json side = sidecar;
        side["graph_file"] = o.gen_out;
        side["graph_fnv1a64"] = hex64(fnv1a(text));
        spit(o.gen_out + ".json", side.dump(2) + "\n", "sidecar");
        sidecar["graph_file"] = o.gen_out;
    }
    return emit(sidecar);
}

Json count_json(const CountReport& r)
{
    Json j{{"k", r.k}, {"copies", big(r.copies)}, {"closed_walks", big(r.closed_walks)}};
    Json paths = Json::object();
    for (const auto& [i, v] : r.paths) paths[std::to_string(i)] = big(v);
    j["paths"] = paths;
    if (r.per_arc) {
        Json arcs = Json::array();
        for (std::size_t i = 0; i < r.per_arc->arcs.size(); ++i)
            arcs.push_back({{"arc", arc_json(r.per_arc->arcs[i])}, {"copies", std::to_string(r.per_arc->counts[i])}});
        j["per_arc"] = arcs;
    } else {
        j["per_arc"] = nullptr;
    }
    if (r.per_vertex) {
        Json v = Json::array();
        for (auto c : *r.per_vertex) v.push_back(std::to_string(c));
        j["per_vertex"] = v;
    } else {
        j["per_vertex"] = nullptr;
    }
    return j;
}

int run_count(const Options& o)
{
    const OrientedGraph g = load_graph(o.in);
    CountOptions opt;
    opt.threads = o.threads;
    for (auto v : parse_uints(o.paths)) opt.path_orders.push_back(v);
    opt.per_arc = o.per_arc;
    opt.per_vertex = o.per_vertex;
    return emit(count_json(count_report(g, o.k, opt)));
}

int run_check(const Options& o)
{
    const OrientedGraph g = load_graph(o.in);
    Json out{{"vertices", g.order()}, {"arcs", g.arc_count()}, {"mode", std::string(to_string(g.mode()))}};
    bool ok = true;
    std::vector<Forbidden> forbidden;
    for (const auto& tok : split_list(o.forbid)) forbidden.push_back(parse_forbidden(tok));
    Json free = Json::array();
    for (const auto& f : forbidden) {
        Json e{{"forbidden", to_string(f)}};
        if (f.kind == Forbidden::Kind::transitive_triangle) {
            e["has_subgraph"] = has_transitive_triangle(g);
        } else {
            e["has_subgraph"] = f.length <= g.order() && has_cycle_subgraph(g, f.length);
            e["has_closed_walk"] = has_closed_walk(g, f.length);
        }
        ok = ok && !e["has_subgraph"].get<bool>();
        free.push_back(e);
    }
    out["freeness"] = free;
    if (o.neighbor_d) {
        if (o.k == 0) throw UsageError("--neighbor-d needs --k");
        const auto r = check_neighbor_condition(g, o.k, *o.neighbor_d);
        Json nc{{"k", o.k}, {"d", *o.neighbor_d}, {"limit", r.limit}, {"holds", r.holds}};
        if (r.witness)
            nc["witness"] = {{"vertex", r.witness->vertex}, {"cycle", r.witness->cycle}, {"neighbors_in_cycle", r.witness->neighbors_in_cycle}};
        out["neighbor_condition"] = nc;
        ok = ok && r.holds;
    }
    out["pass"] = ok;
    return emit(out, ok);
}

int run_clear(const Options& o)
{
    const OrientedGraph g = load_graph(o.in);
    const auto r = clear(g, o.k, o.clear_forbid);
    Json out{{"k", o.k},
             {"removed_arcs", r.removed_arcs},
             {"removed_vertices", r.removed_vertices},
             {"is_fixed_point", r.is_fixed_point},
             {"kept_vertices", r.kept_vertices},
             {"vertices", r.cleared.order()},
             {"arcs", r.cleared.arc_count()}};
    out["free_of_closed_walk"] = r.free_of_closed_walk ? Json(*r.free_of_closed_walk) : Json(nullptr);
    out["is_cleared"] = r.is_cleared();
    const std::string text = write_graph(r.cleared);
    if (o.clear_out.empty())
        out["graph"] = text;
    else
        spit(o.clear_out, text, "output");
    return emit(out, r.is_cleared());
}

int run_frobenius(const Options& o)
{
    const auto r = representable(o.target, parse_uints(o.gens));
    Json out{{"representable", r.representable}, {"witness", r.witness}};
    out["target"] = o.target;
    out["generators"] = parse_uints(o.gens);
    out["brauer_bound"] = r.brauer_bound;
    out["gcd_chain"] = r.gcd_chain;
    return emit(out);
}

int run_predict(const Options& o)
{
    const Mode mode = parse_mode(o.mode);
    const auto p = predicted_extremal(o.k, o.l, o.n, mode);
    auto opt_rat = [](const std::optional<Rational>& r) { return r ? Json(rat(*r)) : Json(nullptr); };
    Json out{{"k", p.k}, {"l", p.l}, {"n", p.n}, {"mode", std::string(to_string(p.mode))},
             {"regime", std::string(to_string(p.regime))}, {"source", p.source}, {"exponent", p.exponent}};
    out["coefficient"] = opt_rat(p.coefficient);
    out["leading_term"] = opt_rat(p.leading_term);
    out["exact_value"] = p.exact_value ? Json(big(*p.exact_value)) : Json(nullptr);
    out["interval"] = p.interval ? Json::array({p.interval->first, p.interval->second}) : Json(nullptr);
    out["d"] = p.d ? Json(*p.d) : Json(nullptr);
    out["blowup_lower_bound"] = opt_rat(p.blowup_lower_bound);
    out["alternative_coefficient"] = opt_rat(p.alternative_coefficient);
    if (!p.note.empty()) out["note"] = p.note;
    Json hyp = Json::array();
    for (const auto& h : p.hypotheses) hyp.push_back({{"name", h.name}, {"holds", h.holds}});
    out["hypotheses"] = hyp;
    Json all = Json::array();
    if (o.k >= 3 && o.l >= 3 && o.k != o.l)
        for (const auto& s : applicable_statements(o.k, o.l, o.n, mode))
            all.push_back({{"regime", std::string(to_string(s.regime))}, {"source", s.source}, {"coefficient", opt_rat(s.coefficient)}});
    out["applicable"] = all;
    return emit(out);
}

int run_optimize(const Options& o)
{
    DensityModel model;
    Json source;
    if (!o.pattern.empty() && o.pattern.find('/') == std::string::npos && o.pattern.find('.') == std::string::npos) {
        IdOptions idopt = o.pattern_id;
        idopt.kind = o.pattern;
        const ConstructionId id = make_id(idopt);
        model = DensityModel{construction_pattern(id), o.k == 0 ? id.natural_k() : o.k, {}};
        source = id_json(id);
    } else {
        if (o.k == 0) throw UsageError("--k is required with a pattern file");
        model = read_pattern_file(o.pattern, o.k);
        source = {{"file", o.pattern}};
    }
    model.validate();
    Json out{{"pattern", source}, {"k", model.k}};
    if (model.pattern.has_threshold()) {
        ThresholdOptions opt;
        if (!o.threshold_range.empty()) {
            opt.lo = o.threshold_range[0];
            opt.hi = o.threshold_range[1];
        }
        opt.resolution = o.resolution;
        opt.mc_samples = o.mc_samples;
        opt.seed = o.seed;
        manifest.seeds = {o.seed};
        const auto t = optimize_threshold(model, opt, o.threads);
        Json w = Json::array();
        for (const auto& x : model.pattern.blob_weights) w.push_back(rat(x));
        out["weights"] = w;
        out["value"] = t.density;
        out["exponent"] = model.k;
        out["value_as_rational"] = nullptr;
        out["c_star"] = t.c_star;
        out["density_binomial"] = t.density_binomial;
        out["grid_density"] = t.grid_density ? Json(*t.grid_density) : Json(nullptr);
        if (t.monte_carlo)
            out["monte_carlo"] = {{"mean", t.monte_carlo->mean}, {"standard_error", t.monte_carlo->standard_error},
                                  {"samples", t.monte_carlo->samples}};
        else
            out["monte_carlo"] = nullptr;
        out["unimodal"] = t.unimodal;
        Json scan = Json::array();
        for (auto [c, v] : t.scan) scan.push_back({c, v});
        out["scan"] = scan;
        out["evaluations"] = t.evaluations;
        return emit(out);
    }
    if (!o.threshold_range.empty()) throw UsageError("--threshold-range needs a pattern with threshold arcs");
    manifest.seeds = {12345};
    const auto w = optimize_weights(model, {}, 1e-10, {}, o.threads);
    out["weights"] = w.weights;
    out["value"] = w.value;
    out["exponent"] = w.exponent;
    out["value_as_rational"] = w.value_as_rational ? Json(rat(*w.value_as_rational)) : Json(nullptr);
    if (w.rational_weights) {
        Json rw = Json::array();
        for (const auto& x : *w.rational_weights) rw.push_back(rat(x));
        out["rational_weights"] = rw;
    } else {
        out["rational_weights"] = nullptr;
    }
    out["c_star"] = nullptr;
    out["starts"] = w.starts;
    return emit(out);
}

int run_spectral(const Options& o)
{
    const OrientedGraph g = load_graph(o.in);
    const Spectrum s = spectrum(g, o.bipartition);
    Json ev = Json::array();
    for (auto z : s.eigenvalues) ev.push_back({z.real(), z.imag()});
    Json out{{"k", o.k}, {"eigenvalues", ev}, {"symmetrized", s.symmetrized}, {"max_residual", s.max_residual}};
    out["bipartition"] = s.bipartition ? Json::array({s.bipartition->first, s.bipartition->second}) : Json(nullptr);
    bool ok = true;
    if (o.k > 0) {
        const auto t = trace_power_via_spectrum(s, o.k);
        out["trace_power"] = {t.real(), t.imag()};
        out["closed_walks"] = big(count_closed_walks(g, o.k));
    }
    if (s.bipartition) {
        const auto pos = positive_real_part_sum(s);
        out["positive_part"] = {{"sum", pos.sum}, {"bound", pos.bound}, {"within_bound", pos.within_bound},
                                {"symmetrized_sum", pos.symmetrized_sum}, {"ky_fan_holds", pos.ky_fan_holds}};
        ok = pos.within_bound && pos.ky_fan_holds;
        if (o.k % 4 == 2) {
            const auto b = bipartite_cycle_bound(g, o.k);
            out["cycle_bound"] = {{"copies", big(b.count)}, {"bound", b.bound}, {"spectral_bound", b.spectral_bound}, {"holds", b.holds}};
            ok = ok && b.holds;
        }
    }
    return emit(out, ok);
}

int run_search(const Options& o)
{
    std::vector<Forbidden> forbidden;
    for (const auto& tok : split_list(o.forbid)) forbidden.push_back(parse_forbidden(tok));
    if (forbidden.empty()) throw UsageError("--forbid needs at least one pattern");
    const Mode mode = parse_mode(o.mode);
    ExtremalRecord rec;
    if (o.local) {
        manifest.seeds = {o.seed};
        rec = local_search_extremal(o.n, o.k, forbidden, o.budget, o.seed, mode);
    } else {
        rec = exhaustive_extremal(o.n, o.k, forbidden, mode, o.witnesses, o.threads);
    }
    Json fb = Json::array();
    for (const auto& f : rec.forbidden) fb.push_back(to_string(f));
    Json wit = Json::array();
    for (const auto& g : rec.witnesses) wit.push_back(write_graph(g));
    Json out{{"n", rec.n},
             {"k", rec.k},
             {"forbidden", fb},
             {"mode", std::string(to_string(rec.mode))},
             {"max_copies", big(rec.max_copies)},
             {"witnesses", wit},
             {"method", std::string(to_string(rec.method))},
             {"search_budget", rec.search_budget},
             {"graphs_examined", rec.graphs_examined},
             {"lower_bound_only", rec.lower_bound_only}};
    if (const auto p = predicted_exact(o.k, forbidden, o.n, mode))
        out["predicted"] = {{"value", big(p->first)}, {"source", p->second}, {"match", p->first == rec.max_copies}};
    else
        out["predicted"] = nullptr;
    return emit(out);
}

int run_reproduce(const Options& o)
{
    std::vector<const Recipe*> todo;
    if (o.recipe == "all") {
        for (const auto& r : recipes()) todo.push_back(&r);
    } else {
        const Recipe* r = find_recipe(o.recipe);
        if (!r) {
            std::string known;
            for (const auto& x : recipes()) known += std::string(known.empty() ? "" : ", ") + x.id;
            throw UsageError("unknown target \"" + o.recipe + "\"; known targets: " + known);
        }
        todo.push_back(r);
    }
    Json results = Json::array();
    bool ok = true;
    for (const Recipe* r : todo) {
        const RecipeResult res = run_recipe(*r, o.threads);
        std::cerr << (res.pass ? "PASS " : "FAIL ") << res.criterion << " " << res.id << "\n";
        Json m = Json::object();
        for (const auto& x : res.measured) m[x.name] = x.value;
        results.push_back({{"criterion", res.criterion}, {"target", res.id}, {"title", res.title}, {"pass", res.pass},
                           {"measured", m}, {"failures", res.failures}});
        ok = ok && res.pass;
    }
    return emit(Json{{"results", results}, {"pass", ok}}, ok);
}

void error_json(const std::string& name, const std::string& message)
{
    std::cerr << Json{{"error", name}, {"message", message}}.dump() << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    manifest.argv.assign(argv, argv + argc);
    Options o;
    CLI::App app{"Directed-cycle Turan toolkit"};
    app.require_subcommand(1);
    app.add_option("--threads", o.threads, "worker threads (default: DICYCLE_THREADS or hardware concurrency)")
        ->check(CLI::PositiveNumber);
    app.set_version_flag("--version", version);

    auto* gen = app.add_subcommand("gen", "generate a construction");
    add_id_options(gen, o.gen_id, true);
    gen->add_option("--n", o.gen_n, "number of vertices")->required();
    gen->add_option("--seed", o.gen_seed, "seed (random_bipartite)");
    gen->add_option("--k", o.gen_k, "cycle length for the closed form (default: the construction's own)");
    gen->add_option("-o,--out", o.gen_out, "graph file; the sidecar goes to <file>.json");

    auto* count = app.add_subcommand("count", "exact cycle, walk and path counts");
    count->add_option("--in", o.in, "graph file")->required();
    count->add_option("--k", o.k, "cycle length")->required();
    count->add_option("--paths", o.paths, "comma-separated path orders (vertices)");
    count->add_flag("--per-arc", o.per_arc, "copies through each arc");
    count->add_flag("--per-vertex", o.per_vertex, "copies through each vertex");

    auto* check = app.add_subcommand("check", "forbidden-subgraph and neighbour-condition checks");
    check->add_option("--in", o.in, "graph file")->required();
    check->add_option("--forbid", o.forbid, "comma-separated patterns such as C4,TT3");
    check->add_option("--k", o.k, "cycle length for the neighbour condition");
    check->add_option("--neighbor-d", o.neighbor_d, "divisor d for the neighbour condition");

    auto* clr = app.add_subcommand("clear", "remove arcs and vertices on no C_k");
    clr->add_option("--in", o.in, "graph file")->required();
    clr->add_option("--k", o.k, "cycle length")->required();
    clr->add_option("--forbid", o.clear_forbid, "forbidden cycle length to test for closed walks");
    clr->add_option("-o,--out", o.clear_out, "write the cleared graph here");

    auto* frob = app.add_subcommand("frobenius", "representability of l by the generators");
    frob->add_option("--l", o.target, "target")->required();
    frob->add_option("--gens", o.gens, "comma-separated generators")->required();

    auto* pred = app.add_subcommand("predict", "known value of ex(n, C_k, C_l)");
    pred->add_option("--k", o.k)->required();
    pred->add_option("--l", o.l)->required();
    pred->add_option("--n", o.n)->required();
    pred->add_option("--mode", o.mode, "oriented or directed");

    auto* optim = app.add_subcommand("optimize", "optimize blob weights or the threshold constant");
    optim->add_option("--pattern", o.pattern, "construction id or pattern JSON file")->required();
    optim->add_option("--k", o.k, "cycle length (default: the construction's own)");
    optim->add_option("--threshold-range", o.threshold_range, "search interval for c")->expected(2);
    optim->add_option("--resolution", o.resolution, "grid cross-check resolution (0 = off)");
    optim->add_option("--mc-samples", o.mc_samples, "Monte Carlo cross-check samples (0 = off)");
    optim->add_option("--seed", o.seed, "Monte Carlo seed");
    optim->add_option("--param", o.pattern_id.param, "construction parameter");
    optim->add_option("--threshold-arcs", o.pattern_id.threshold_arcs, "cycle, chords or all");
    optim->add_option("--placement", o.pattern_id.placement, "adjacent or opposite");

    auto* spec = app.add_subcommand("spectral", "eigenvalues and spectral bounds");
    spec->add_option("--in", o.in, "graph file")->required();
    spec->add_option("--k", o.k, "cycle length");
    spec->add_option("--bipartition", o.bipartition, "require an orientation of K_{m,n-m}");

    auto* search = app.add_subcommand("search", "extremal search");
    search->add_option("--n", o.n)->required();
    search->add_option("--k", o.k)->required();
    search->add_option("--forbid", o.forbid, "comma-separated patterns such as C4,TT3")->required();
    search->add_option("--mode", o.mode, "oriented or directed");
    search->add_flag("--local", o.local, "simulated annealing (lower bound only)");
    search->add_option("--budget", o.budget, "local search steps");
    search->add_option("--seed", o.seed, "local search seed");
    search->add_option("--witnesses", o.witnesses, "maximum witnesses to report");

    auto* repro = app.add_subcommand("reproduce", "run an acceptance recipe");
    repro->add_option("target", o.recipe, "recipe id, criterion number or all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        error_json("UsageError", e.what());
        return 2;
    }
    manifest.threads = o.threads;

    try {
        if (*gen) return run_gen(o);
        if (*count) return run_count(o);
        if (*check) return run_check(o);
        if (*clr) return run_clear(o);
        if (*frob) return run_frobenius(o);
        if (*pred) return run_predict(o);
        if (*optim) return run_optimize(o);
        if (*spec) return run_spectral(o);
        if (*search) return run_search(o);
        if (*repro) return run_reproduce(o);
    } catch (const Error& e) {
        error_json(e.name(), e.what());
        return 2;
    } catch (const std::exception& e) {
        error_json("InternalError", e.what());
        return 2;
    }
    return 2;
}
