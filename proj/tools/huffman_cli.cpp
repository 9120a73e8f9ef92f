#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "huffman/construct.hpp"
#include "huffman/continuum.hpp"
#include "huffman/error.hpp"
#include "huffman/imaging.hpp"
#include "huffman/lattice.hpp"
#include "huffman/metrics.hpp"
#include "huffman/project.hpp"
#include "huffman/tensor_io.hpp"

namespace fs = std::filesystem;
using namespace huff;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Context {
    std::string out_dir;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string command;
    std::vector<std::string> argv;
    ojson extra = ojson::object();
    std::vector<std::string> outputs;
};

Context ctx;

std::string default_out_dir()
{
    const char* env = std::getenv("HUFFMAN_OUT");
    return env && *env ? env : ".";
}

std::string out_path(const std::string& name)
{
    fs::path p(name);
    if (p.is_relative()) p = fs::path(ctx.out_dir) / p;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    ctx.outputs.push_back(p.string());
    return p.string();
}

void write_text(const std::string& name, const std::string& text)
{
    std::string path = out_path(name);
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os << text;
    if (!os) throw IoError("write failed: " + path);
}

void write_tensor_file(const std::string& name, const Tensor& t) { save_tensor(out_path(name), t); }

void write_provenance()
{
    ojson j;
    j["command"] = ctx.command;
    j["argv"] = ctx.argv;
    j["version"] = kVersion;
    j["seed"] = ctx.seed;
    j["threads"] = ctx.threads;
    for (auto& [k, v] : ctx.extra.items()) j[k] = v;
    j["outputs"] = ctx.outputs;
    std::string path = (fs::path(ctx.out_dir) / (ctx.command + ".provenance.json")).string();
    fs::create_directories(ctx.out_dir);
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os << j.dump(2) << "\n";
}

std::vector<std::int64_t> parse_ints(const std::string& s)
{
    std::vector<std::int64_t> v;
    std::stringstream ss(s);
    std::string item;
    try {
        while (std::getline(ss, item, ',')) v.push_back(std::stoll(item));
    } catch (const std::logic_error&) {
        throw DomainError("expected comma separated integers, got '" + s + "'");
    }
    return v;
}

Shape parse_shape(const std::string& s)
{
    Shape out;
    for (auto x : parse_ints(s)) {
        if (x < 1) throw DomainError("extents must be >= 1");
        out.push_back(static_cast<std::size_t>(x));
    }
    return out;
}

ojson report_json(const QualityReport& r) { return ojson::parse(r.to_json()); }

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

Tensor load_input(const std::string& path)
{
    if (fs::path(path).extension() == ".pgm") return load_pgm(path);
    return load_tensor(path);
}

// Flat key=value config file; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos) throw IoError("bad config line: " + line);
            continue;
        }
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            return s;
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

// ---- table helpers ----

const std::vector<std::vector<std::int64_t>> kTable1Alphabets{
    {0, 1, 5, 10, 37, 140}, {0, 1, 4, 8, 28, 99}, {0, 1, 4, 8, 24, 75}, {0, 1, 4, 8, 23, 69},
    {0, 1, 4, 8, 21, 59},   {0, 1, 3, 6, 16, 44}, {0, 1, 2, 4, 7, 13},  {0, 1, 1, 1, 1, 1},
};

std::string table1_csv()
{
    std::ostringstream os;
    os << "a,b,c,k,d,e,R,M,OP,bits,cedge_lo,cedge_hi,class\n";
    for (const auto& al : kTable1Alphabets) {
        Tensor t = build_diamond(5, al, false);
        CorrelationResult c = correlate(t, t);
        QualityReport r = classify(t, c);
        std::int64_t lo = 0, hi = 0;
        for (std::size_t f = 0; f < c.values.size(); ++f)
            if (c.edge_mask[f]) {
                lo = std::min(lo, c.values.ints()[f]);
                hi = std::max(hi, c.values.ints()[f]);
            }
        for (auto x : al) os << x << ",";
        char buf[256];
        std::snprintf(buf, sizeof buf, "%.6g,%.6g,%lld,%d,%lld,%lld,%s\n", r.R, r.M, static_cast<long long>(r.OP.i),
                      r.bits, static_cast<long long>(lo), static_cast<long long>(hi),
                      to_string(r.classification).c_str());
        os << buf;
    }
    return os.str();
}

std::string table2_csv(std::int64_t e, std::int64_t f_min, std::int64_t f_max)
{
    auto sols = diamond7_solve({e, f_min, f_max, 4096, 65536});
    std::sort(sols.begin(), sols.end(), [](const auto& x, const auto& y) { return x.alphabet > y.alphabet; });
    std::ostringstream os;
    os << "f,g,h,R,M,S,bits,OP,Cedge,closed_form\n";
    for (const auto& s : sols) {
        Tensor t = build_diamond(7, s.alphabet);
        QualityReport r = classify(t);
        char buf[256];
        std::snprintf(buf, sizeof buf, "%lld,%lld,%lld,%.6g,%.6g,%.6g,%d,%lld,%lld,%d\n",
                      static_cast<long long>(s.alphabet[5]), static_cast<long long>(s.alphabet[6]),
                      static_cast<long long>(s.alphabet[7]), r.R, r.M, r.S, r.bits, static_cast<long long>(r.OP.i),
                      static_cast<long long>(r.C_edge.i), s.closed_form ? 1 : 0);
        os << buf;
    }
    return os.str();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Huffman sequence and array toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    ctx.out_dir = default_out_dir();
    app.add_option("--out-dir", ctx.out_dir, "Output directory (default $HUFFMAN_OUT or .)");
    app.add_option("--seed", ctx.seed, "Seed for every random draw");
    app.add_option("--threads", ctx.threads, "Worker cap; results do not depend on it")->check(CLI::PositiveNumber);
    app.set_version_flag("--version", kVersion);

    // generate
    auto* gen = app.add_subcommand("generate", "Construct an array from a family recipe");
    std::string g_family = "fibonacci", g_spec, g_key, g_alphabet, g_out;
    std::size_t g_N = 7, g_dims = 2;
    std::int64_t g_b = 2, g_n = 1, g_e = 3, g_f = 0;
    bool g_odd = false;
    gen->add_option("--spec", g_spec, "Recipe text, e.g. \"family=fibonacci_binet N=15 b=2\"");
    gen->add_option("--family", g_family);
    gen->add_option("--N", g_N);
    gen->add_option("--b", g_b);
    gen->add_option("--n", g_n);
    gen->add_flag("--odd", g_odd);
    gen->add_option("--key", g_key);
    gen->add_option("--dims", g_dims);
    gen->add_option("--alphabet", g_alphabet, "Comma separated diamond alphabet");
    gen->add_option("--e", g_e, "diamond7: e when solving for f, g, h");
    gen->add_option("--f", g_f, "diamond7: f when solving for g, h");
    gen->add_option("-o,--output", g_out);
    gen->callback([&] {
        HuffmanSpec s;
        if (!g_spec.empty()) {
            s = HuffmanSpec::parse(g_spec);
        } else {
            s.family = parse_family(g_family);
            s.N = g_N;
            s.b = g_b;
            s.n = g_n;
            s.odd = g_odd;
            s.key = g_key;
            s.dims = g_dims;
            if (!g_alphabet.empty()) s.alphabet = parse_ints(g_alphabet);
            if (s.family == Family::diamond7 && s.alphabet.empty()) {
                if (g_f < 1) throw DomainError("diamond7 needs --alphabet or --f");
                auto sols = diamond7_solve({g_e, g_f, g_f, 4096, 65536});
                if (sols.empty()) throw DomainError("no diamond7 solution for this e, f");
                auto pick = std::find_if(sols.begin(), sols.end(), [](const auto& x) { return x.closed_form; });
                s.alphabet = (pick != sols.end() ? *pick : sols.back()).alphabet;
            }
        }
        Tensor t = generate(s);
        std::string name = g_out.empty() ? "array.txt" : g_out;
        write_tensor_file(name, t);
        QualityReport r = classify(t);
        write_text(stem(name) + ".report.json", r.to_json() + "\n");
        ctx.extra["spec"] = s.to_text();
        std::cout << s.to_text() << "\n" << r.to_json() << "\n";
    });

    // analyze
    auto* ana = app.add_subcommand("analyze", "Quality metrics of an array");
    std::string a_in;
    bool a_csv = false;
    ana->add_option("input", a_in)->required();
    ana->add_flag("--csv", a_csv);
    ana->callback([&] {
        QualityReport r = classify(load_input(a_in));
        if (a_csv)
            std::cout << QualityReport::csv_header() << "\n" << r.csv_row() << "\n";
        else
            std::cout << r.to_json() << "\n";
    });

    // project
    auto* prj = app.add_subcommand("project", "Discrete projection along p:q or p:q:r");
    std::string p_in, p_dir, p_out;
    bool p_family = false;
    std::int64_t p_order = 5;
    prj->add_option("input", p_in)->required();
    prj->add_option("--dir", p_dir, "Direction p:q or p:q:r");
    prj->add_flag("--family", p_family, "Project the seed's outer product along every default direction");
    prj->add_option("--max-order", p_order, "Largest |p|+|q| for --family");
    prj->add_option("-o,--output", p_out);
    prj->callback([&] {
        Tensor a = load_input(p_in);
        if (p_family) {
            auto fam = spectrally_equivalent_family(a, default_directions(p_order));
            std::string dir = p_out.empty() ? "family" : p_out;
            std::ostringstream idx;
            idx << "direction,file,length," << QualityReport::csv_header() << "\n";
            for (const auto& m : fam) {
                std::string file = "p" + std::to_string(m.dir.p) + "_q" + std::to_string(m.dir.q) + ".txt";
                write_tensor_file((fs::path(dir) / file).string(), m.array);
                idx << m.dir.to_string() << "," << file << "," << m.array.size() << "," << m.report.csv_row() << "\n";
            }
            write_text((fs::path(dir) / "index.csv").string(), idx.str());
            std::cout << idx.str();
            return;
        }
        if (p_dir.empty()) throw DomainError("project needs --dir or --family");
        ProjectionDirection d = ProjectionDirection::parse(p_dir);
        Tensor out = d.r ? project3(a, d) : project(a, d);
        write_tensor_file(p_out.empty() ? "projection.txt" : p_out, out);
        ctx.extra["direction"] = d.to_string();
        std::cout << "length " << shape_string(out.shape()) << "\n" << classify(out).to_json() << "\n";
    });

    // twin
    auto* tw = app.add_subcommand("twin", "Alternating-sign twin and its cross metrics");
    std::string t_in, t_out;
    tw->add_option("input", t_in)->required();
    tw->add_option("-o,--output", t_out);
    tw->callback([&] {
        Tensor a = load_input(t_in);
        Tensor t = twin(a);
        write_tensor_file(t_out.empty() ? "twin.txt" : t_out, t);
        CrossMetrics m = cross_metrics(correlate(a, t));
        ojson j;
        j["twin"] = classify(t).to_json();
        j["cross"] = {{"peak", m.peak}, {"R", m.R}, {"M", m.M}};
        std::cout << j.dump() << "\n";
    });

    // probe
    auto* prb = app.add_subcommand("probe", "Synthesise an odd-phase delta-correlated probe");
    std::string pr_spec, pr_out, pr_samples = "1463", pr_step = "0.3";
    std::vector<std::string> pr_terms;
    double pr_kappa = 0;
    bool pr_pgm = false;
    prb->add_option("--spec", pr_spec, "ProbeSpec JSON file");
    prb->add_option("--term", pr_terms, "Phase term e1[,e2]:coefficient, e.g. 3:0.3333333333333333");
    prb->add_option("--samples", pr_samples, "Samples per axis, comma separated");
    prb->add_option("--step", pr_step, "Spatial step per axis, comma separated");
    prb->add_option("--kappa", pr_kappa);
    prb->add_flag("--pgm", pr_pgm, "Also write a 16-bit PGM (2D only)");
    prb->add_option("-o,--output", pr_out);
    prb->callback([&] {
        ProbeSpec s;
        if (!pr_spec.empty()) {
            std::ifstream is(pr_spec);
            if (!is) throw IoError("cannot open " + pr_spec);
            std::stringstream ss;
            ss << is.rdbuf();
            s = ProbeSpec::from_json(ss.str());
        } else {
            s.samples = parse_shape(pr_samples);
            s.dims = static_cast<int>(s.samples.size());
            std::stringstream ss(pr_step);
            std::string item;
            while (std::getline(ss, item, ',')) s.step.push_back(std::stod(item));
            s.kappa = pr_kappa;
            if (pr_terms.empty()) pr_terms.push_back(s.dims == 1 ? "3:0.3333333333333333" : "3,0:0.3333333333333333");
            for (const auto& term : pr_terms) {
                auto colon = term.find(':');
                if (colon == std::string::npos) throw DomainError("phase term needs exponents:coefficient");
                std::vector<int> e;
                for (auto x : parse_ints(term.substr(0, colon))) e.push_back(static_cast<int>(x));
                s.phase[e] = std::stod(term.substr(colon + 1));
            }
        }
        Tensor h = synthesize_probe(s);
        std::string name = pr_out.empty() ? "probe.txt" : pr_out;
        write_tensor_file(name, h);
        write_text(stem(name) + ".spec.json", s.to_json() + "\n");
        if (pr_pgm && h.rank() == 2) save_pgm(out_path(stem(name) + ".pgm"), h, 65535, true);
        DeltaReport d = verify_delta_correlation(h);
        ojson j{{"periodic_off_peak", d.periodic_off_peak}, {"aperiodic_off_peak", d.aperiodic_off_peak},
                {"S", d.spectral_flatness}, {"min", min_value(h)}};
        ctx.extra["probe"] = ojson::parse(s.to_json());
        std::cout << j.dump() << "\n";
    });

    // discretize
    auto* dis = app.add_subcommand("discretize", "Scale, round and greedily tweak into an integer array");
    std::string d_in, d_out, d_obj = "M";
    int d_bits = 7, d_iters = 500;
    double d_step = 0.6, d_hi = 3.0;
    dis->add_option("input", d_in, "Real tensor; omit for sampled Airy");
    dis->add_option("--bits", d_bits);
    dis->add_option("--objective", d_obj, "M or R");
    dis->add_option("--max-iters", d_iters);
    dis->add_option("--airy-step", d_step);
    dis->add_option("--airy-hi", d_hi);
    dis->add_option("-o,--output", d_out);
    dis->callback([&] {
        Tensor h = d_in.empty() ? airy(airy_grid(d_step, d_hi)) : load_input(d_in);
        TweakResult r = discretize_and_tweak(h, d_bits, parse_objective(d_obj), d_iters);
        write_tensor_file(d_out.empty() ? "discretized.txt" : d_out, r.array);
        ojson j = report_json(r.report);
        j["iterations"] = r.iterations;
        j["scale"] = r.scale;
        j["undefined"] = r.undefined;
        std::cout << j.dump() << "\n";
    });

    // encode / decode / deblur
    auto* enc = app.add_subcommand("encode", "Blur an object with a mask");
    std::string e_obj, e_mask, e_out;
    enc->add_option("object", e_obj)->required();
    enc->add_option("mask", e_mask)->required();
    enc->add_option("-o,--output", e_out);
    enc->callback([&] {
        Tensor out = encode(load_input(e_obj), load_input(e_mask));
        write_tensor_file(e_out.empty() ? "blurred.txt" : e_out, out);
        std::cout << shape_string(out.shape()) << "\n";
    });

    auto* dec = app.add_subcommand("decode", "First estimate O_1 = crop(I (x) flip H) / C0");
    std::string dc_in, dc_mask, dc_out;
    dec->add_option("blurred", dc_in)->required();
    dec->add_option("mask", dc_mask)->required();
    dec->add_option("-o,--output", dc_out);
    dec->callback([&] {
        Tensor mask = load_input(dc_mask);
        Tensor out = deblur(load_input(dc_in), mask, {1, false}).estimate;
        write_tensor_file(dc_out.empty() ? "decoded.txt" : dc_out, out);
        std::cout << shape_string(out.shape()) << "\n";
    });

    auto* deb = app.add_subcommand("deblur", "Iterative alias removal");
    std::string db_in, db_mask, db_out, db_ref;
    int db_iters = 2;
    bool db_snap = false;
    deb->add_option("blurred", db_in)->required();
    deb->add_option("mask", db_mask)->required();
    deb->add_option("-p,--iterations", db_iters);
    deb->add_flag("--snap", db_snap, "Round the final estimate to integers");
    deb->add_option("--reference", db_ref, "Original object for error statistics");
    deb->add_option("-o,--output", db_out);
    int deblur_status = 0;
    deb->callback([&] {
        DeblurResult r = deblur(load_input(db_in), load_input(db_mask), {db_iters, db_snap});
        write_tensor_file(db_out.empty() ? "deblurred.txt" : db_out, r.estimate);
        ojson j{{"iterations", r.iterations}, {"diverged", r.diverged}, {"steps", r.steps}};
        if (!db_ref.empty()) {
            Tensor ref = load_input(db_ref);
            j["max_error"] = max_abs_difference(r.estimate, ref);
            j["max_error_raw"] = max_abs_difference(r.raw, ref);
        }
        std::cout << j.dump() << "\n";
        if (r.diverged) deblur_status = 4;
    });

    // pedestal
    auto* ped = app.add_subcommand("pedestal", "Two-shot pedestal measurement");
    std::string pd_obj, pd_mask;
    double pd_kappa = -1;
    ped->add_option("object", pd_obj)->required();
    ped->add_option("mask", pd_mask)->required();
    ped->add_option("--kappa", pd_kappa, "Pedestal; default max|H|");
    ped->callback([&] {
        Tensor mask = load_input(pd_mask);
        double k = pd_kappa < 0 ? max_abs(mask) : pd_kappa;
        PedestalPair p = pedestal_pair(load_input(pd_obj), mask, k);
        write_tensor_file("I1.txt", p.I1);
        write_tensor_file("I2.txt", p.I2);
        write_tensor_file("Ic.txt", p.Ic);
        ctx.extra["kappa"] = k;
        std::cout << "kappa " << k << "\n";
    });

    // ghost
    auto* gh = app.add_subcommand("ghost", "Single-pixel ghost imaging with a scanned mask");
    std::string gh_cfg, gh_obj, gh_mask, gh_rule = "boundary", gh_scan;
    double gh_kappa = -1;
    int gh_iters = 1;
    gh->add_option("--config", gh_cfg, "key=value file with object, mask, kappa, rule, iterations, scan");
    gh->add_option("--object", gh_obj);
    gh->add_option("--mask", gh_mask);
    gh->add_option("--kappa", gh_kappa, "Pedestal; default -min(H)");
    gh->add_option("--rule", gh_rule, "exact or boundary");
    gh->add_option("-p,--iterations", gh_iters);
    gh->add_option("--scan", gh_scan, "Scan extents per axis");
    gh->callback([&] {
        if (!gh_cfg.empty()) {
            auto kv = read_config(gh_cfg);
            auto get = [&](const char* k, std::string& dst) {
                if (kv.count(k)) dst = kv[k];
            };
            get("object", gh_obj);
            get("mask", gh_mask);
            get("rule", gh_rule);
            get("scan", gh_scan);
            if (kv.count("kappa")) gh_kappa = std::stod(kv["kappa"]);
            if (kv.count("iterations")) gh_iters = std::stoi(kv["iterations"]);
            if (kv.count("seed")) ctx.seed = std::stoull(kv["seed"]);
        }
        if (gh_obj.empty() || gh_mask.empty()) throw DomainError("ghost needs an object and a mask");
        Tensor obj = load_input(gh_obj), mask = load_input(gh_mask);
        GhostOptions o;
        o.kappa = gh_kappa < 0 ? std::max(0.0, -min_value(mask)) : gh_kappa;
        o.rule = parse_kappa_rule(gh_rule);
        o.iterations = gh_iters;
        if (!gh_scan.empty()) o.scan = parse_shape(gh_scan);
        GhostResult r = ghost_image(obj, mask, o);
        write_tensor_file("bucket.txt", r.bucket);
        write_tensor_file("reconstruction.txt", r.reconstruction);
        ojson j{{"kappa", o.kappa},
                {"kappa_prime", r.kappa_prime},
                {"rule", to_string(r.rule)},
                {"partial", r.partial},
                {"max_error", max_abs_difference(r.reconstruction, obj)}};
        ctx.extra["ghost"] = j;
        write_text("ghost.json", j.dump(2) + "\n");
        std::cout << j.dump() << "\n";
    });

    // watermark
    auto* wm = app.add_subcommand("watermark", "Embed or locate a mask in a host image");
    std::string w_mode, w_host, w_mark, w_offset = "0,0", w_out;
    wm->add_option("mode", w_mode, "embed or locate")->required()->check(CLI::IsMember({"embed", "locate"}));
    wm->add_option("host", w_host)->required();
    wm->add_option("mark", w_mark)->required();
    wm->add_option("--offset", w_offset, "Offset from centre, per axis");
    wm->add_option("-o,--output", w_out);
    wm->callback([&] {
        Tensor host = load_input(w_host), mark = load_input(w_mark);
        if (w_mode == "embed") {
            Tensor out = watermark_embed(host, mark, parse_ints(w_offset));
            write_tensor_file(w_out.empty() ? "marked.txt" : w_out, out);
            return;
        }
        WatermarkHit h = watermark_locate(host, mark);
        ojson j{{"offset", h.offset}, {"peak", h.peak}, {"threshold", h.threshold}, {"detected", h.detected()}};
        std::cout << j.dump() << "\n";
    });

    // baseline
    auto* bl = app.add_subcommand("baseline", "Metrics of random distinct-integer arrays");
    std::string b_shape = "5,5";
    std::int64_t b_lo = -12, b_hi = 13;
    std::size_t b_trials = 10000;
    bool b_csv = false;
    bl->add_option("--shape", b_shape);
    bl->add_option("--lo", b_lo);
    bl->add_option("--hi", b_hi);
    bl->add_option("--trials", b_trials);
    bl->add_flag("--csv", b_csv, "Write per-trial reports to baseline.csv");
    bl->callback([&] {
        BaselineStats s = random_baseline(parse_shape(b_shape), b_lo, b_hi, b_trials, ctx.seed, ctx.threads, b_csv);
        if (b_csv) {
            std::ostringstream os;
            os << "trial," << QualityReport::csv_header() << "\n";
            for (std::size_t t = 0; t < s.reports.size(); ++t) os << t << "," << s.reports[t].csv_row() << "\n";
            write_text("baseline.csv", os.str());
        }
        ojson j{{"trials", s.trials},
                {"undefined", s.undefined},
                {"R", {{"min", s.R.min}, {"mean", s.R.mean}, {"max", s.R.max}}},
                {"M", {{"min", s.M.min}, {"mean", s.M.mean}, {"max", s.M.max}}}};
        write_text("baseline.json", j.dump(2) + "\n");
        std::cout << j.dump() << "\n";
    });

    // noise-study
    auto* ns = app.add_subcommand("noise-study", "Delta raster versus diffuse mask under equal white noise");
    std::string n_obj, n_mask, n_shape = "31,31";
    double n_sigma = 1.0;
    std::size_t n_trials = 500;
    ns->add_option("--object", n_obj, "Object tensor; default random 0..255 of --shape");
    ns->add_option("--shape", n_shape);
    ns->add_option("--mask", n_mask, "Mask tensor; default H9 x H9");
    ns->add_option("--sigma", n_sigma);
    ns->add_option("--trials", n_trials);
    ns->callback([&] {
        Tensor obj = n_obj.empty() ? random_integers(parse_shape(n_shape), 0, 255, ctx.seed) : load_input(n_obj);
        Tensor mask = n_mask.empty() ? outer_product({catalog("H9"), catalog("H9")}) : load_input(n_mask);
        NoiseStudy r = multiplex_noise_study(obj, mask, n_sigma, n_trials, ctx.seed, ctx.threads);
        ojson j{{"mse_delta", r.mse_delta}, {"mse_diffuse", r.mse_diffuse}, {"ratio", r.ratio}, {"elements", r.elements}};
        write_text("noise_study.json", j.dump(2) + "\n");
        std::cout << j.dump() << "\n";
    });

    // tables
    auto* tb = app.add_subcommand("tables", "Regenerate the 5x5 and 7x7 alphabet tables as CSV");
    int tb_which = 2;
    std::int64_t tb_e = 3, tb_fmin = 3, tb_fmax = 20;
    tb->add_option("--table", tb_which)->check(CLI::IsMember({1, 2}));
    tb->add_option("--e", tb_e);
    tb->add_option("--f-min", tb_fmin);
    tb->add_option("--f-max", tb_fmax);
    tb->callback([&] {
        std::string csv = tb_which == 1 ? table1_csv() : table2_csv(tb_e, tb_fmin, tb_fmax);
        write_text("table" + std::to_string(tb_which) + ".csv", csv);
        std::cout << csv;
    });

    for (int i = 0; i < argc; ++i) ctx.argv.emplace_back(argv[i]);
    try {
        app.parse(argc, argv);
        ctx.command = app.get_subcommands().front()->get_name();
        write_provenance();
        return deblur_status;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
