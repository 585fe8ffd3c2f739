#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qdl/empirical.hpp"
#include "qdl/errors.hpp"
#include "qdl/expansion.hpp"
#include "qdl/parallel.hpp"
#include "qdl/ratios.hpp"
#include "qdl/verify.hpp"
#include "qdl/zeros.hpp"
#include "report_io.hpp"

using namespace qdl;
using qdl::cli::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kAccuracy = 2, kVerifyFailed = 3 };

struct Options {
    std::string command, verify_name, config_path;
    double X = 0.0;  // 0: per-command default
    std::string phi, w = "gaussian", j = "exact", out, format;
    double T = 40.0, cprime = 0.0;
    std::vector<double> sigma;
    unsigned threads = 0;
    std::uint64_t seed = 1;
    int bootstrap = 20;
    bool sweep_empirical = false;

    void resolve() {
        const bool small = command == "empirical" || command == "zeros";
        if (X == 0.0 && command != "verify") X = small ? 2000.0 : 1e6;
        if (phi.empty() && command != "verify") phi = small ? "bump2:0.8" : "fejer:1.5";
        if (format.empty()) format = command == "sweep" ? "csv" : "json";
        if (sigma.empty()) sigma = {0.5, 0.8, 1.0, 1.2, 1.5, 2.0, 2.5};
    }

    json effective() const {
        json c;
        c["command"] = command;
        if (command == "verify") c["name"] = verify_name;
        c["X"] = X;
        c["phi"] = phi;
        c["w"] = w;
        c["T"] = T;
        c["cprime"] = cprime;
        c["j"] = j;
        if (command == "sweep") c["sigma"] = sigma;
        c["threads"] = par::threads();
        c["seed"] = seed;
        c["bootstrap"] = bootstrap;
        c["format"] = format;
        c["out"] = out;
        c["config_file"] = config_path;
        c["cache_dir"] = zeros::ZeroCache::default_dir().string();
        return c;
    }
};

struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file.open(path);
        if (!file) throw ResourceError("cannot open " + path + " for writing");
        os = &file;
    }
};

std::string kind_of(const std::string& spec) { return spec.substr(0, spec.find(':')); }

ratios::FamilyParams family(const Options& o, const testfn::WeightFunction& w) {
    return ratios::FamilyParams::make(o.X, w, o.cprime);
}

expansion::JMode j_mode(const Options& o) { return o.j == "exact" ? expansion::JMode::exact : expansion::JMode::asymptotic; }

cli::Table sweep(const Options& o) {
    const auto w = testfn::make_weight(o.w);
    const auto fam = family(o, w);
    const zeros::ZeroCache cache(zeros::ZeroCache::default_dir());
    cli::Table t;
    t.header = {"sigma", "X", "L", "prediction", "expansion", "main", "weight_log", "gamma_integral", "prime_sum",
                "J", "J_phi_hat_1", "phi_hat_1"};
    if (o.sweep_empirical) t.header.insert(t.header.end(), {"empirical", "empirical_se"});
    for (double s : o.sigma) {
        std::ostringstream spec;
        spec << kind_of(o.phi) << ':' << s;
        const auto phi = testfn::make_testfn(spec.str());
        const auto p = ratios::predict_density(phi, w, fam);
        const auto e = expansion::expansion_density(phi, w, fam, j_mode(o));
        std::vector<double> row = {s,
                                   o.X,
                                   fam.L,
                                   p.value,
                                   e.value,
                                   e.term("main"),
                                   e.term("weight_log"),
                                   e.term("gamma_integral"),
                                   e.term("prime_sum"),
                                   e.term("J"),
                                   expansion::j_asymptotic(phi, w, fam),
                                   phi.phi_hat(1.0)};
        if (o.sweep_empirical) {
            const auto m = empirical::empirical_density(phi, w, fam, {o.T, &cache, o.bootstrap, o.seed});
            row.push_back(m.value);
            row.push_back(std::get<double>(std::find_if(m.params.begin(), m.params.end(), [](auto& kv) {
                                               return kv.first == "bootstrap_se";
                                           })->second));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

cli::Table populate_zeros(const Options& o, json& summary) {
    const auto w = testfn::make_weight(o.w);
    const auto fam = family(o, w);
    const zeros::ZeroCache cache(zeros::ZeroCache::default_dir());
    const auto ds = arith::sieve_squarefree_odd(fam.d_cutoff);
    const auto sets = zeros::zeros_for(ds, o.T, &cache);
    cli::Table t;
    t.header = {"d", "zeros", "count_estimate", "complete"};
    std::size_t incomplete = 0, total = 0;
    for (const auto& z : sets) {
        incomplete += !z.complete;
        total += z.ordinates.size();
        t.rows.push_back({double(z.d), double(z.ordinates.size()), z.count_estimate, z.complete ? 1.0 : 0.0});
    }
    summary["characters"] = sets.size();
    summary["incomplete"] = incomplete;
    summary["zeros"] = total;
    summary["d_cutoff"] = fam.d_cutoff;
    summary["cache_dir"] = cache.dir().string();
    return t;
}

int run(Options& o) {
    const auto t0 = std::chrono::steady_clock::now();
    o.resolve();
    cli::RunInfo info{o.effective(), 0.0};
    auto finish = [&] { info.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
    Output out(o.out);
    std::ostream& os = *out.os;
    const bool csv = o.format == "csv";

    if (o.command == "verify") {
        verify::Params p{o.X, o.phi, o.w, o.cprime, o.seed};
        const auto r = verify::run(o.verify_name, p);
        finish();
        if (csv) cli::write_csv(os, r);
        else os << cli::to_json(r, info).dump(2) << '\n';
        return r.passed ? kOk : kVerifyFailed;
    }
    if (o.command == "sweep" || o.command == "zeros") {
        json summary;
        const auto t = o.command == "sweep" ? sweep(o) : populate_zeros(o, summary);
        finish();
        if (csv) {
            cli::write_csv(os, t);
        } else {
            auto j = cli::to_json(t, info);
            if (!summary.empty()) j["summary"] = summary;
            os << j.dump(2) << '\n';
        }
        return kOk;
    }

    const auto w = testfn::make_weight(o.w);
    const auto phi = testfn::make_testfn(o.phi);
    const auto fam = family(o, w);
    DensityReport r;
    if (o.command == "predict") {
        r = ratios::predict_density(phi, w, fam);
    } else if (o.command == "expand") {
        r = expansion::expansion_density(phi, w, fam, j_mode(o));
    } else {
        const zeros::ZeroCache cache(zeros::ZeroCache::default_dir());
        r = empirical::empirical_density(phi, w, fam, {o.T, &cache, o.bootstrap, o.seed});
    }
    finish();
    if (csv) cli::write_csv(os, r);
    else os << cli::to_json(r, info).dump(2) << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"qdl: one-level density of low-lying zeros of quadratic Dirichlet L-functions"};
    app.set_version_flag("--version", std::string(QDL_VERSION));
    app.set_config("--config", "", "flat 'key = value' file; command-line flags take precedence")
        ->check(CLI::ExistingFile);
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1, 1);
    app.fallthrough();

    app.add_option("--X", o.X, "family scale X (default 1e6; 2000 for empirical/zeros)");
    app.add_option("--phi", o.phi, "test function kind:sigma, kind in {fejer, bump2}");
    app.add_option("--w", o.w, "weight function kind")->capture_default_str();
    app.add_option("--T", o.T, "zero height for empirical/zeros")->capture_default_str();
    app.add_option("--cprime", o.cprime, "contour abscissa c' (0 = automatic)");
    app.add_option("--j", o.j, "J(X) evaluation")->check(CLI::IsMember({"exact", "asym"}))->capture_default_str();
    app.add_option("--sigma", o.sigma, "sigma list for sweep")->delimiter(',');
    app.add_option("--threads", o.threads, "worker threads (0 = hardware)");
    app.add_option("--seed", o.seed, "bootstrap / sampling seed")->capture_default_str();
    app.add_option("--bootstrap", o.bootstrap, "bootstrap resamples for empirical")->capture_default_str();
    app.add_option("--out", o.out, "output file (default stdout)");
    app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    app.add_subcommand("predict", "ratios-conjecture prediction");
    app.add_subcommand("expand", "explicit expansion in powers of 1/L");
    app.add_subcommand("empirical", "density from computed zeros");
    auto* ver = app.add_subcommand("verify", "run a named identity check");
    ver->add_option("name", o.verify_name, "check name")->required()->check(CLI::IsMember(verify::names()));
    app.add_subcommand("zeros", "compute zeros for the family into the cache");
    auto* sw = app.add_subcommand("sweep", "table over sigma");
    sw->add_flag("--with-empirical", o.sweep_empirical, "add empirical columns (slow)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }
    o.command = app.get_subcommands().front()->get_name();
    if (auto* c = app.get_option("--config"); c->count()) o.config_path = c->as<std::string>();

    try {
        par::set_threads(o.threads);
        return run(o);
    } catch (const AccuracyError& e) {
        std::cerr << "accuracy: " << e.what() << " (achieved " << e.achieved() << ")\n";
        return kAccuracy;
    } catch (const ResourceError& e) {
        std::cerr << "resource: " << e.what() << '\n';
        return kAccuracy;
    } catch (const DataQualityError& e) {
        std::cerr << "data quality: " << e.what() << '\n';
        return kAccuracy;
    } catch (const Error& e) {
        // domain, config and unsupported-input errors are the caller's to fix
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
}
