#pragma once

#include <charconv>
#include <string>
#include <system_error>

#include <json.hpp>

#include "darboux/certify.hpp"
#include "darboux/partition.hpp"
#include "darboux/stieltjes.hpp"
#include "darboux/substitution.hpp"

namespace darboux {

// Shortest decimal representation that round-trips the double; used for CSV
// so CLI outputs stay byte-stable and loss-free.
inline std::string shortest_decimal(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline const char* to_string(Rigor r)
{
    return r == Rigor::certified ? "certified" : "heuristic";
}

inline nlohmann::json to_json(const Enclosure& e)
{
    return nlohmann::json{{"lo", e.lo}, {"hi", e.hi}};
}

inline nlohmann::json to_json(const Partition& p)
{
    return nlohmann::json(std::vector<double>(p.breakpoints().begin(), p.breakpoints().end()));
}

inline nlohmann::json to_json(const IntegralEnclosure& e)
{
    return nlohmann::json{{"lo", e.bracket.lo},
                          {"hi", e.bracket.hi},
                          {"cells", e.cells},
                          {"osc_sum", e.osc_sum},
                          {"rigor", to_string(e.rigor)},
                          {"converged", e.converged()}};
}

inline nlohmann::json to_json(const IntegrabilityCertificate& c, bool with_partition = false)
{
    nlohmann::json j{{"lo", c.bracket.lo},
                     {"hi", c.bracket.hi},
                     {"cells", c.partition.cell_count()},
                     {"osc_sum", c.osc_sum},
                     {"epsilon", c.epsilon},
                     {"rigor", to_string(c.rigor)},
                     {"certified", true}};
    if (with_partition)
        j["partition"] = to_json(c.partition);
    return j;
}

inline nlohmann::json to_json(const Inconclusive& c)
{
    return nlohmann::json{{"lo", c.bracket.lo},
                          {"hi", c.bracket.hi},
                          {"cells", c.cells},
                          {"osc_sum", c.best_osc_sum},
                          {"rigor", to_string(c.rigor)},
                          {"certified", false}};
}

inline nlohmann::json to_json(const TransferReport& r)
{
    return nlohmann::json{{"eq", "9"},
                          {"lhs_upper", r.lhs_upper},
                          {"lhs_lower", r.lhs_lower},
                          {"rhs_upper", r.rhs_upper},
                          {"rhs_lower", r.rhs_lower},
                          {"max_abs_gap", r.max_abs_gap},
                          {"rigor", to_string(r.rigor)}};
}

inline nlohmann::json to_json(const ReduceReport& r)
{
    return nlohmann::json{{"eq", "16"},
                          {"stieltjes_gap", r.stieltjes_gap},
                          {"riemann_gap", r.riemann_gap},
                          {"osc_term", r.osc_term},
                          {"slack", r.slack},
                          {"ok", r.bound16_ok},
                          {"rigor", to_string(r.rigor)},
                          {"note", r.note}};
}

inline nlohmann::json to_json(const LedgerRow& r)
{
    return nlohmann::json{
        {"eq", r.eq}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"slack", r.slack}, {"ok", r.ok}};
}

inline nlohmann::json to_json(const BoundLedger& l)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : l.rows)
        rows.push_back(to_json(r));
    return nlohmann::json{{"eta", l.eta},
                          {"rows", std::move(rows)},
                          {"all_ok", l.all_ok},
                          {"rigor", to_string(l.rigor)}};
}

inline nlohmann::json to_json(const SubstitutionVerdict& v)
{
    return nlohmann::json{{"lhs", to_json(v.lhs)},
                          {"rhs", to_json(v.rhs)},
                          {"overlap", v.overlap},
                          {"max_width", v.max_width},
                          {"width_ok", v.width_ok},
                          {"lhs_cells", v.lhs_cells},
                          {"rhs_cells", v.rhs_cells},
                          {"rigor", to_string(v.rigor)},
                          {"ledger", to_json(v.ledger)}};
}

} // namespace darboux
