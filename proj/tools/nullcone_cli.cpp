// Command-line front end: grids in, CSV out.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nullcone/acceptance.hpp"
#include "nullcone/errors.hpp"
#include "nullcone/isometries.hpp"
#include "nullcone/sweep.hpp"

using namespace nullcone;

namespace {

constexpr int kExitVerify = 1, kExitConfig = 2, kExitDomain = 3;

struct Settings {
    std::string k = "0";
    std::string scale = "einstein";
    int n = 4;
    std::string t = "0.5:2:4";
    std::string chi = "0.1:1:4";
    std::vector<std::string> angles;
    std::string output;
    bool serial = false;
    double step = 1e-3, fd_tol = 1e-5;
    // propagator
    std::string ref = "0.3,0.2,1.1,0.4";
    std::string columns = "all";
    std::string field_route = "ambient";
    // isometry
    int samples = 40;
    double tol = 1e-8;
    unsigned seed = 42;
    // verify
    bool list = false;
    std::vector<int> only;
};

int parse_k(const std::string& s) {
    if (s == "0" || s == "+0" || s == "-0") return 0;
    if (s == "1" || s == "+1") return 1;
    if (s == "-1") return -1;
    throw ConfigError("k must be -1, 0 or +1, got '" + s + "'");
}

std::vector<double> parse_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(std::string("bad number '") + item + "' in " + what);
        }
    }
    return out;
}

std::vector<sweep::ChartPoint> grid(const Settings& s, int k) {
    std::vector<sweep::GridSpec> ang;
    for (const auto& a : s.angles) ang.push_back(sweep::GridSpec::parse(a));
    if (ang.empty()) {
        // equatorial plane, azimuth 0
        for (int i = 0; i + 1 < s.n - 2; ++i) ang.push_back({std::numbers::pi / 2, std::numbers::pi / 2, 1});
        if (s.n > 2) ang.push_back({0.0, 0.0, 1});
    }
    if (static_cast<int>(ang.size()) != s.n - 2)
        throw ConfigError("need " + std::to_string(s.n - 2) + " --angle grids for n = " + std::to_string(s.n));
    return sweep::chart_grid(k, sweep::GridSpec::parse(s.t), sweep::GridSpec::parse(s.chi), ang);
}

void write_csv(const sweep::Table& tab, const std::string& path) {
    std::ofstream file;
    if (!path.empty()) {
        file.open(path);
        if (!file) throw ConfigError("cannot open output '" + path + "'");
    }
    std::ostream& out = path.empty() ? std::cout : file;
    for (std::size_t i = 0; i < tab.header.size(); ++i) out << (i ? "," : "") << tab.header[i];
    out << '\n';
    char buf[64];
    for (const auto& row : tab.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out << (i ? "," : "") << buf;
        }
        out << '\n';
    }
}

sweep::Exec exec_of(const Settings& s) { return s.serial ? sweep::Exec::serial : sweep::Exec::parallel; }

int run_isometry(const Settings& s) {
    const int k = parse_k(s.k);
    const auto a = scalefactor::resolve_scale(s.scale);
    const auto alg = isometries::isometry_algebra_dimension(k, a, s.n, s.samples, s.tol, s.seed);
    const auto cls = isometries::classify_special(k, a, {}, s.n);
    std::cout << "dimension=" << alg.dimension << " classification=" << isometries::special_name(cls.kind) << '\n';
    if (!cls.ode.empty()) std::cout << "ode=" << cls.ode << '\n';
    if (cls.offset) std::printf("offset=%.17g\n", *cls.offset);
    if (!cls.note.empty()) std::cout << "note=" << cls.note << '\n';
    if (alg.ill_conditioned) std::cout << "warning=singular-value gap within 10x of the tolerance\n";
    std::cout << "basis";
    for (int a1 = 0; a1 < s.n + 2; ++a1)
        for (int b = a1 + 1; b < s.n + 2; ++b) std::cout << ",J" << a1 << b;
    std::cout << '\n';
    char buf[64];
    for (std::size_t i = 0; i < alg.basis.size(); ++i) {
        std::cout << i;
        for (double v : alg.basis[i].params()) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            std::cout << ',' << buf;
        }
        std::cout << '\n';
    }
    return 0;
}

int run_verify(const Settings& s) {
    if (s.list) {
        for (const auto& c : acceptance::criteria())
            std::printf("%2d  %-26s  limit %.0f s\n", c.id, c.title.c_str(), c.time_limit);
        return 0;
    }
    int failed = 0;
    for (const auto& c : acceptance::criteria()) {
        if (!s.only.empty() && std::find(s.only.begin(), s.only.end(), c.id) == s.only.end()) continue;
        const auto r = acceptance::run_criterion(c.id, s.seed);
        std::printf("%s\n", acceptance::format_line(r).c_str());
        std::fflush(stdout);
        failed += !r.passed;
    }
    return failed ? kExitVerify : 0;
}

int run_grid_command(const std::string& cmd, const Settings& s) {
    const int k = parse_k(s.k);
    const auto a = scalefactor::resolve_scale(s.scale);
    const auto pts = grid(s, k);
    sweep::Table tab;
    if (cmd == "embed") {
        tab = sweep::embed_table(k, a, pts, exec_of(s));
    } else if (cmd == "metric") {
        tab = sweep::metric_table(k, a, pts, exec_of(s));
    } else if (cmd == "curvature") {
        tab = sweep::curvature_table(k, a, pts, exec_of(s), {s.step, s.fd_tol});
    } else {
        if (s.n != 4) throw ConfigError("propagator needs n = 4");
        const auto r = parse_list(s.ref, "--ref");
        if (r.size() != 4) throw ConfigError("--ref needs t,chi,theta1,theta2");
        const auto ref = embedding::make_chart_point(k, r[0], r[1], {r[2], r[3]});
        sweep::PropagatorColumns cols;
        cols.potential = s.columns == "all" || s.columns == "potential";
        cols.field = s.columns == "all" || s.columns == "field";
        if (s.field_route == "closed") cols.route = sweep::PropagatorColumns::FieldRoute::closed;
        else if (s.field_route == "dd") cols.route = sweep::PropagatorColumns::FieldRoute::dd;
        tab = sweep::propagator_table(k, a, pts, ref, cols, exec_of(s));
    }
    write_csv(tab, s.output);
    return 0;
}

// key = value lines become "--key value" arguments placed before the real ones,
// so a flag on the command line wins (options take the last value).
std::vector<std::string> config_args(const std::string& path, CLI::App& sub) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::vector<std::string> out;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = path + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        const CLI::Option* opt = sub.get_option_no_throw("--" + key);
        if (!opt || key == "config") throw ConfigError(where + ": unknown key '" + key + "'");
        if (opt->get_items_expected_max() == 0) {
            if (value == "true" || value == "1") out.push_back("--" + key);
            else if (value != "false" && value != "0") throw ConfigError(where + ": '" + key + "' takes true or false");
        } else {
            out.push_back("--" + key);
            out.push_back(value);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conformally flat spacetimes as null-cone sections: grids in, CSV out.\n"
                 "Grids are start:stop:count (inclusive). Units: H = 1.\n"};
    app.name("nullcone");
    app.require_subcommand(1);
    Settings s;
    std::string config;

    auto add_section = [&](CLI::App* c) {
        c->add_option("--k", s.k, "spatial curvature type: -1, 0, +1")->capture_default_str();
        c->add_option("--scale", s.scale, "scale factor: preset name or expression in t")->capture_default_str();
        c->add_option("--n", s.n, "spacetime dimension")->capture_default_str()->check(CLI::Range(2, 6));
        c->add_option("--config", config, "key = value file; flags given here win");
    };
    auto add_grid = [&](CLI::App* c) {
        c->add_option("--t", s.t, "conformal time grid start:stop:count")->capture_default_str();
        c->add_option("--chi", s.chi, "radial grid start:stop:count")->capture_default_str();
        c->add_option("--angle", s.angles, "one grid per sphere angle (default: pi/2 ..., 0)");
        c->add_option("-o,--output", s.output, "CSV path (default stdout)");
        c->add_flag("--serial", s.serial, "use the serial reference loop");
    };

    std::vector<CLI::App*> subs;
    for (const char* name : {"embed", "metric", "curvature", "propagator"}) {
        auto* c = app.add_subcommand(name);
        add_section(c);
        add_grid(c);
        subs.push_back(c);
    }
    subs[0]->description("chart coords, y^0..y^{n+1}, c(y), f(y) per grid point");
    subs[1]->description("induced metric entries and closed-form residual per grid point");
    subs[2]->description("scalar curvature, Ricci eigenvalues, oracle residual per grid point");
    subs[2]->add_option("--step", s.step, "finite-difference base step")->capture_default_str();
    subs[2]->add_option("--fd-tol", s.fd_tol, "Richardson agreement tolerance")->capture_default_str();
    subs[3]->description("two-point functions between each grid point and --ref (n = 4)");
    subs[3]->add_option("--ref", s.ref, "reference point t,chi,theta1,theta2")->capture_default_str();
    subs[3]->add_option("--columns", s.columns, "scalar | potential | field | all")
        ->capture_default_str()
        ->check(CLI::IsMember({"scalar", "potential", "field", "all"}));
    subs[3]->add_option("--field-route", s.field_route, "closed | ambient | dd")
        ->capture_default_str()
        ->check(CLI::IsMember({"closed", "ambient", "dd"}));

    auto* iso = app.add_subcommand("isometry", "dimension, classification and basis of the isometry algebra");
    add_section(iso);
    iso->add_option("--samples", s.samples, "sample points")->capture_default_str();
    iso->add_option("--tol", s.tol, "relative rank tolerance")->capture_default_str();
    iso->add_option("--seed", s.seed, "sampling seed")->capture_default_str();
    subs.push_back(iso);

    auto* ver = app.add_subcommand("verify", "run the acceptance suite; exit 0 iff all pass");
    ver->add_flag("--list", s.list, "list criteria without running them");
    ver->add_option("--only", s.only, "run only these criterion ids");
    ver->add_option("--seed", s.seed, "seed for the random draws")->capture_default_str();
    ver->add_option("--config", config, "key = value file; flags given here win");
    subs.push_back(ver);

    for (auto* c : subs)
        for (auto* o : c->get_options()) o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    for (auto* c : {subs[0], subs[1], subs[2], subs[3]})
        c->get_option("--angle")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    ver->get_option("--only")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        // splice config-file values in right after the subcommand name
        for (std::size_t i = 0; i < args.size(); ++i) {
            std::string path;
            if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
            else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
            if (path.empty()) continue;
            CLI::App* sub = nullptr;
            for (auto* c : subs)
                if (!args.empty() && c->get_name() == args[0]) sub = c;
            if (!sub) throw ConfigError("--config must follow a subcommand");
            const auto extra = config_args(path, *sub);
            args.insert(args.begin() + 1, extra.begin(), extra.end());
            break;
        }
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        for (auto* c : subs) {
            if (!c->parsed()) continue;
            const std::string name = c->get_name();
            if (name == "verify") return run_verify(s);
            if (name == "isometry") return run_isometry(s);
            return run_grid_command(name, s);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "config error: scale factor: " << e.what() << '\n';
        return kExitConfig;
    } catch (const sweep::GridFailure& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const StepFailure& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitDomain;
    }
    return 0;
}
