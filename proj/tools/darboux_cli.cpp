// Command-line front end: enclosures, integrability certificates,
// change-of-variable verdicts, bound ledgers, and convergence sweeps, with
// JSON/CSV artifacts suitable for plots and CI.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "darboux/darboux.hpp"
#include "darboux/serialize.hpp"

namespace {

using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_heuristic = 2;
constexpr int exit_exhausted = 3;

std::size_t env_budget()
{
    if (const char* s = std::getenv("DARBOUX_BUDGET")) {
        try {
            const long long v = std::stoll(s);
            if (v >= 1)
                return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
        std::cerr << "darboux: ignoring invalid DARBOUX_BUDGET\n";
    }
    return darboux::default_cell_budget;
}

struct Output {
    std::string path;   // empty = stdout
    std::string format; // json or csv

    void write(const std::string& text) const
    {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw darboux::ArgumentError("cannot open output file " + path);
        out << text;
    }
};

int rigor_exit(darboux::Rigor r)
{
    return r == darboux::Rigor::certified ? exit_ok : exit_heuristic;
}

darboux::Integrator make_integrator(const std::string& phi_id, const darboux::ClosedInterval& I,
                                    double anchor, double tol)
{
    if (phi_id.empty())
        return darboux::Integrator::identity(I);
    const auto phi = darboux::make_gallery_function(phi_id, I);
    return darboux::indefinite_integral(phi, I.a, anchor, tol);
}

int run_enclose(const std::string& f_id, const std::string& phi_id,
                const darboux::ClosedInterval& I, double anchor, double tol, std::size_t budget,
                const Output& out)
{
    const auto Phi = make_integrator(phi_id, I, anchor, std::max(1e-10, tol / 64.0));
    const auto f = darboux::make_gallery_function(f_id, I);
    const auto enc = darboux::integral_enclosure(f, Phi, I, tol, budget);
    json j = darboux::to_json(enc);
    j["schema"] = 1;
    j["command"] = "enclose";
    out.write(j.dump(2) + "\n");
    if (!enc.converged())
        return exit_exhausted;
    return rigor_exit(enc.rigor);
}

int run_certify(const std::string& f_id, const std::string& phi_id,
                const darboux::ClosedInterval& I, double anchor, double eps, std::size_t budget,
                bool with_partition, const Output& out)
{
    const auto Phi = make_integrator(phi_id, I, anchor, 1e-10);
    const auto f = darboux::make_gallery_function(f_id, I);
    const auto result = darboux::certify_integrable(f, Phi, I, eps, budget);
    json j;
    int code = exit_ok;
    if (const auto* cert = std::get_if<darboux::IntegrabilityCertificate>(&result)) {
        j = darboux::to_json(*cert, with_partition);
        code = rigor_exit(cert->rigor);
    } else {
        const auto& inc = std::get<darboux::Inconclusive>(result);
        j = darboux::to_json(inc);
        j["epsilon"] = eps;
        code = exit_exhausted;
    }
    j["schema"] = 1;
    j["command"] = "certify";
    out.write(j.dump(2) + "\n");
    return code;
}

int run_substitute(const std::string& f_id, const std::string& phi_id,
                   const darboux::ClosedInterval& I, double anchor, double tol, double eta,
                   std::size_t budget, const Output& out)
{
    const auto phi = darboux::make_gallery_function(phi_id, I);
    const auto Phi = darboux::indefinite_integral(phi, I.a, anchor, std::max(1e-10, tol / 64.0));
    const auto image = Phi.range_over(I);
    const auto f = darboux::make_gallery_function(
        f_id, darboux::ClosedInterval(image.lo - 1e-9, image.hi + 1e-9));
    darboux::SubstitutionOptions opt;
    opt.tol = tol;
    opt.eta = eta;
    opt.budget = budget;
    const auto verdict = darboux::change_of_variable(f, phi, I, anchor, opt);
    json j = darboux::to_json(verdict);
    j["schema"] = 1;
    j["command"] = "substitute";
    out.write(j.dump(2) + "\n");
    if (!verdict.width_ok)
        return exit_exhausted;
    return rigor_exit(verdict.rigor);
}

int run_ledger(const std::string& f_id, const std::string& phi_id,
               const darboux::ClosedInterval& I, double anchor, double eta, std::size_t budget,
               const Output& out)
{
    const auto phi = darboux::make_gallery_function(phi_id, I);
    const auto Phi = darboux::indefinite_integral(phi, I.a, anchor, 1e-10);
    const auto image = Phi.range_over(I);
    const auto f = darboux::make_gallery_function(
        f_id, darboux::ClosedInterval(image.lo - 1e-9, image.hi + 1e-9));

    const auto seed = darboux::eta_partition(phi, I, eta, budget);
    const auto classes = darboux::classify(seed, phi, eta);
    const auto vp = darboux::build_verification_partition(f, phi, Phi, classes, eta, budget);
    const auto ledger = darboux::verify_ledger(f, phi, Phi, classes, vp, budget);

    json j = darboux::to_json(ledger);
    j["schema"] = 1;
    j["command"] = "ledger";
    j["classes"] = {{"good", classes.count(darboux::CellClass::good)},
                    {"bounded", classes.count(darboux::CellClass::bounded)},
                    {"undulating", classes.count(darboux::CellClass::undulating)}};
    // Transfer and reduction reports join the ledger whenever the density is
    // nonnegative (they presuppose a nondecreasing integrator).
    if (darboux::effectively_nonnegative(phi.range(I))) {
        const darboux::Partition probe = darboux::Partition::uniform(I, 128);
        j["rows"].push_back(darboux::to_json(darboux::transfer_check(f, Phi, probe)));
        j["rows"].push_back(darboux::to_json(darboux::reduce_check(f, phi, Phi, probe)));
    }
    out.write(j.dump(2) + "\n");
    if (!ledger.all_ok)
        return exit_exhausted;
    return rigor_exit(ledger.rigor);
}

int run_converge(const std::string& f_id, const std::string& phi_id,
                 const darboux::ClosedInterval& I, double anchor, std::size_t min_cells,
                 std::size_t max_cells, const Output& out)
{
    const auto Phi = make_integrator(phi_id, I, anchor, 1e-10);
    const auto f = darboux::make_gallery_function(f_id, I);
    darboux::Rigor rigor = darboux::Rigor::certified;
    std::vector<darboux::IntegralEnclosure> rows;
    for (std::size_t n = std::max<std::size_t>(1, min_cells); n <= max_cells; n *= 2)
        rows.push_back(darboux::uniform_enclosure(f, Phi, I, n));
    for (const auto& r : rows)
        rigor = darboux::combine(rigor, r.rigor);

    if (out.format == "csv") {
        std::string text = "cells,lo,hi,width\n";
        for (const auto& r : rows) {
            text += std::to_string(r.cells) + "," + darboux::shortest_decimal(r.bracket.lo) +
                    "," + darboux::shortest_decimal(r.bracket.hi) + "," +
                    darboux::shortest_decimal(r.bracket.width()) + "\n";
        }
        out.write(text);
    } else {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"cells", r.cells},
                           {"lo", r.bracket.lo},
                           {"hi", r.bracket.hi},
                           {"width", r.bracket.width()}});
        json j{{"schema", 1}, {"command", "converge"}, {"rows", std::move(arr)},
               {"rigor", darboux::to_string(rigor)}};
        out.write(j.dump(2) + "\n");
    }
    return rigor_exit(rigor);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Certified Darboux enclosures of Riemann and Riemann-Stieltjes integrals"};
    app.require_subcommand(1);

    std::string f_id, phi_id, output_path, format;
    std::vector<double> interval;
    double tol = 1e-6, eps = 1e-3, eta = 0.0, anchor = 0.0;
    std::size_t budget = env_budget();
    std::size_t min_cells = 2, max_cells = 1024;

    const auto add_common = [&](CLI::App* cmd, bool needs_phi) {
        cmd->add_option("--f", f_id, "gallery id of the integrand")->required();
        auto* phi_opt = cmd->add_option("--phi", phi_id, "gallery id of the density of Phi");
        if (needs_phi)
            phi_opt->required();
        cmd->add_option("--interval", interval, "interval endpoints a b")
            ->expected(2)
            ->required();
        cmd->add_option("--anchor", anchor, "value of Phi at the left endpoint");
        cmd->add_option("--budget", budget, "cell budget (env DARBOUX_BUDGET)");
        cmd->add_option("--output", output_path, "output file (default stdout)");
        cmd->add_option("--format", format, "json or csv (csv: converge only)");
    };

    auto* enclose = app.add_subcommand("enclose", "two-sided integral enclosure");
    add_common(enclose, false);
    enclose->add_option("--tol", tol, "target enclosure width")->required();

    bool with_partition = false;
    auto* certify = app.add_subcommand("certify", "integrability certificate");
    add_common(certify, false);
    certify->add_option("--eps", eps, "oscillation-sum target")->required();
    certify->add_flag("--with-partition", with_partition,
                      "include the certifying breakpoints in the output");

    auto* substitute = app.add_subcommand("substitute", "change-of-variable verdict");
    add_common(substitute, true);
    substitute->add_option("--tol", tol, "target enclosure width")->required();
    substitute->add_option("--eta", eta, "classification eta (default from tol)");

    auto* ledger = app.add_subcommand("ledger", "classification bound ledger");
    add_common(ledger, true);
    ledger->add_option("--eta", eta, "classification eta")->required();

    auto* converge = app.add_subcommand("converge", "uniform refinement sweep");
    add_common(converge, false);
    converge->add_option("--min-cells", min_cells, "first cell count");
    converge->add_option("--max-cells", max_cells, "last cell count (doubling)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        const darboux::ClosedInterval I(interval[0], interval[1]);
        Output out{output_path, format};
        if (out.format.empty())
            out.format = converge->parsed() ? "csv" : "json";
        if (out.format != "json" && out.format != "csv")
            throw darboux::ArgumentError("format must be json or csv");
        if (out.format == "csv" && !converge->parsed())
            throw darboux::ArgumentError("csv output is only available for converge");

        if (enclose->parsed())
            return run_enclose(f_id, phi_id, I, anchor, tol, budget, out);
        if (certify->parsed())
            return run_certify(f_id, phi_id, I, anchor, eps, budget, with_partition, out);
        if (substitute->parsed())
            return run_substitute(f_id, phi_id, I, anchor, tol, eta, budget, out);
        if (ledger->parsed())
            return run_ledger(f_id, phi_id, I, anchor, eta, budget, out);
        if (converge->parsed())
            return run_converge(f_id, phi_id, I, anchor, min_cells, max_cells, out);
        return exit_usage;
    } catch (const darboux::BudgetExceededError& e) {
        std::cerr << "darboux: " << e.what() << " (best " << e.best_achieved << ")\n";
        return exit_exhausted;
    } catch (const darboux::WidthExceededError& e) {
        std::cerr << "darboux: " << e.what() << " (width " << e.best_width << ")\n";
        return exit_exhausted;
    } catch (const std::exception& e) {
        std::cerr << "darboux: " << e.what() << "\n";
        return exit_usage;
    }
}
