// Command-line front end. Exit codes: 0 all checks passed, 1 a check failed or was
// inconclusive, 2 usage or I/O error.
#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "x0p/cli.hpp"
#include "x0p/newform.hpp"

using namespace x0p;

int main(int argc, char** argv) {
    CLI::App app{"Rational points on X0+(N): verification tools"};
    app.require_subcommand(1);

    RunOptions opt;
    bool json_out = false;
    app.add_flag("--json", json_out, "JSON report on stdout");
    app.add_option("--jobs", opt.jobs, "worker threads")->check(CLI::Range(1u, 256u));
    app.add_flag("--offline", opt.offline, "never touch the network");
    app.add_option("--fixtures", opt.fixtures, "fixture directory");
    app.add_option("--cache", opt.newform_cache, "newform response cache directory");

    long max_genus = 6;
    bool check = false;
    auto* genus = app.add_subcommand("genus", "levels N with genus(X0+(N)) <= max");
    genus->add_option("--max", max_genus)->check(CLI::NonNegativeNumber);
    genus->add_flag("--check", check, "compare with the published tables");

    long level = 0;
    auto* verify = app.add_subcommand("verify", "all checks for one level");
    verify->add_option("level,--level", level)->required();

    auto* verify_all = app.add_subcommand("verify-all", "all checks for every fixture level");

    std::uint32_t prime = 0;
    std::vector<int> patches;
    auto* disks = app.add_subcommand("disks", "residue disk coverage at a prime");
    disks->add_option("--level", level)->required();
    disks->add_option("--prime", prime)->required();
    disks->add_option("--patch", patches, "patch index (repeatable); default all");

    std::uint32_t pmin = 5, pmax = 31;
    auto* primes = app.add_subcommand("primes", "search for primes without uncovered disks");
    primes->add_option("--level", level)->required();
    primes->add_option("--min", pmin)->check(CLI::Range(5u, 1000000u));
    primes->add_option("--max", pmax);
    primes->add_option("--patch", patches);

    auto* points = app.add_subcommand("points", "point enumeration and search");
    points->require_subcommand(1);
    auto* pfp = points->add_subcommand("fp", "all F_p points of the canonical model");
    pfp->add_option("--level", level)->required();
    pfp->add_option("--prime", prime)->required();
    long height = 0;
    auto* psearch = points->add_subcommand("search", "rational points of bounded height");
    psearch->add_option("--level", level)->required();
    psearch->add_option("--height", height)->required()->check(CLI::PositiveNumber);
    long disc = 0;
    auto* pcm = points->add_subcommand("cm", "evaluate the CM point of discriminant D");
    pcm->add_option("--level", level)->required();
    pcm->add_option("--disc", disc)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        RunReport r;
        if (*genus) r = cmd_genus(max_genus, check, opt);
        else if (*verify) r = cmd_verify(level, opt);
        else if (*verify_all) r = cmd_verify_all(opt);
        else if (*disks) r = cmd_disks(level, prime, patches, opt);
        else if (*primes) r = cmd_primes(level, pmin, pmax, patches, opt);
        else if (*pfp) r = cmd_points_fp(level, prime, opt);
        else if (*psearch) r = cmd_points_search(level, height, opt);
        else r = cmd_points_cm(level, disc, opt);

        if (json_out) {
            std::cout << r.to_json().dump(2) << "\n";
        } else {
            std::cout << r.to_text();
            if (*genus) {
                for (const char* kind : {"prime", "composite"}) {
                    std::cout << kind << ":\n";
                    std::map<long, std::vector<long>> rows;
                    for (auto& [g, v] : r.data[kind].items()) rows[std::stol(g)] = v.get<std::vector<long>>();
                    for (auto& [g, v] : rows) {
                        std::cout << "  " << g << " |";
                        for (long n : v) std::cout << " " << n;
                        std::cout << "\n";
                    }
                }
            } else if (!r.data.is_null()) {
                std::cout << r.data.dump() << "\n";
            }
        }
        return r.exit_code();
    } catch (const Error& e) {
        std::cerr << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
