#ifndef TCM_CONFIG_HPP
#define TCM_CONFIG_HPP

// run configuration: parsing, validation, and execution into a CsvTable.
// Kept out of the CLI translation unit so tests can drive full runs without
// spawning processes.

#include <optional>
#include <sstream>

#include "tcm/afa.hpp"
#include "tcm/closedforms.hpp"
#include "tcm/csv.hpp"
#include "tcm/dynamics.hpp"

namespace tcm {

enum class Method { exact, afa, closed };

struct DistributionSpec {
    enum class Kind { fock, coherent, thermal } kind = Kind::fock;
    double value = 0.0;  // n0 for fock, nbar otherwise
};

inline ObservableKind parse_observable(const std::string& s) {
    if (s == "s1") return ObservableKind::s1;
    if (s == "s2") return ObservableKind::s2;
    if (s == "s4") return ObservableKind::s4;
    if (s == "ee") return ObservableKind::ee;
    throw std::invalid_argument("unknown observable '" + s + "' (want s1|s2|s4|ee)");
}

inline const char* to_string(ObservableKind k) {
    switch (k) {
        case ObservableKind::s1: return "s1";
        case ObservableKind::s2: return "s2";
        case ObservableKind::s4: return "s4";
        case ObservableKind::ee: return "ee";
    }
    return "?";
}

inline Method parse_method(const std::string& s) {
    if (s == "exact") return Method::exact;
    if (s == "afa") return Method::afa;
    if (s == "closed") return Method::closed;
    throw std::invalid_argument("unknown method '" + s + "' (want exact|afa|closed)");
}

inline const char* to_string(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::afa: return "afa";
        case Method::closed: return "closed";
    }
    return "?";
}

inline DistributionSpec parse_distribution(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("distribution must be fock:n0, coherent:nbar or thermal:nbar");
    const std::string kind = s.substr(0, colon);
    double value = 0.0;
    try {
        std::size_t used = 0;
        value = std::stod(s.substr(colon + 1), &used);
        if (used != s.size() - colon - 1) throw std::invalid_argument("");
    } catch (...) {
        throw std::invalid_argument("bad distribution parameter in '" + s + "'");
    }
    DistributionSpec d;
    d.value = value;
    if (kind == "fock") {
        d.kind = DistributionSpec::Kind::fock;
        if (value < 0.0 || value != std::floor(value))
            throw std::invalid_argument("fock:n0 needs a non-negative integer n0");
    } else if (kind == "coherent") {
        d.kind = DistributionSpec::Kind::coherent;
    } else if (kind == "thermal") {
        d.kind = DistributionSpec::Kind::thermal;
    } else {
        throw std::invalid_argument("unknown distribution kind '" + kind + "'");
    }
    return d;
}

inline std::string to_string(const DistributionSpec& d) {
    const char* k = d.kind == DistributionSpec::Kind::fock
                        ? "fock"
                        : d.kind == DistributionSpec::Kind::coherent ? "coherent" : "thermal";
    return std::string(k) + ":" + format_value(d.value);
}

inline PhotonDensity make_density(const DistributionSpec& d, double tail_tol) {
    switch (d.kind) {
        case DistributionSpec::Kind::fock: return fock(int(d.value));
        case DistributionSpec::Kind::coherent: return coherent(d.value, tail_tol);
        case DistributionSpec::Kind::thermal: return thermal(d.value, tail_tol);
    }
    throw std::invalid_argument("bad distribution");
}

// scenario tokens: all_up | all_down | one_up_specified | one_up_dicke |
// two_up_specified | half_up | dicke:m (m in units of 1, may be half-integer)
inline Scenario parse_scenario(const std::string& s, int N) {
    if (s == "all_up") return {ScenarioKind::all_up, 0};
    if (s == "all_down") return {ScenarioKind::all_down, 0};
    if (s == "one_up_specified") return {ScenarioKind::one_up_specified, 0};
    if (s == "one_up_dicke") return {ScenarioKind::one_up_dicke, 0};
    if (s == "two_up_specified") return {ScenarioKind::two_up_specified, 0};
    if (s == "half_up") {
        if (N % 2 != 0) throw std::invalid_argument("half_up needs an even molecule count");
        return {ScenarioKind::dicke, 0};
    }
    if (s.rfind("dicke:", 0) == 0) {
        double m = 0.0;
        try {
            std::size_t used = 0;
            m = std::stod(s.substr(6), &used);
            if (used != s.size() - 6) throw std::invalid_argument("");
        } catch (...) {
            throw std::invalid_argument("bad dicke:m value in '" + s + "'");
        }
        const double m2d = 2.0 * m;
        if (m2d != std::floor(m2d)) throw std::invalid_argument("dicke:m must be a half-integer");
        return {ScenarioKind::dicke, int(m2d)};
    }
    throw std::invalid_argument("unknown scenario '" + s + "'");
}

struct RunConfig {
    std::string observable = "s1";
    std::string method = "exact";
    std::string scenario = "all_up";
    int N = 1;
    std::string distribution = "fock:0";
    // exactly one may be set explicitly; neither set means beta = 0
    std::optional<double> beta;
    std::optional<double> delta;
    double tau_max = 20.0;
    int steps = 201;
    double tail_tol = 1e-12;
    int threads = 1;
    std::string csv_path;
    std::string svg_path;  // optional

    double resolved_beta() const {
        if (beta && delta) throw std::invalid_argument("beta and delta are mutually exclusive");
        if (delta) {
            if (*delta < 0.0) throw std::invalid_argument("delta must be >= 0");
            return 2.0 * std::sqrt(*delta);
        }
        return beta ? *beta : 0.0;
    }

    void validate() const {
        parse_observable(observable);
        parse_method(method);
        parse_distribution(distribution);
        (void)resolved_beta();
        if (N < 1) throw std::invalid_argument("N must be >= 1");
        if (steps < 2) throw std::invalid_argument("steps must be >= 2");
        if (!(tau_max > 0.0)) throw std::invalid_argument("tau_max must be > 0");
        if (!(tail_tol > 0.0)) throw std::invalid_argument("tail_tol must be > 0");
        if (threads < 1) throw std::invalid_argument("threads must be >= 1");
        parse_scenario(scenario, N);
    }
};

namespace detail {

inline ClosedFormId closed_form_for(ObservableKind obs, int N, double beta, ScenarioKind sc) {
    using Id = ClosedFormId;
    switch (obs) {
        case ObservableKind::s1:
            if (beta == 0.0) {
                if (N == 1) return Id::s1_n1;
                if (N == 2) return Id::s1_n2;
                if (N == 3) return Id::s1_n3;
                if (N == 4) return Id::s1_n4;
            } else if (N == 1) {
                return Id::s1_n1_nr;
            }
            break;
        case ObservableKind::s2:
            if (beta == 0.0) {
                if (N == 1) return Id::s2_n1;
                if (N == 2) return Id::s2_n2;
                if (N == 3) return Id::s2_n3;
            } else if (N == 1) {
                return Id::s2_n1_nr;
            }
            break;
        case ObservableKind::s4:
            if (N == 1) return Id::s4_n1_nr;  // valid at beta = 0 too
            if (N == 2 && beta == 0.0) return Id::s4_n2;
            break;
        case ObservableKind::ee:
            if (beta == 0.0) {
                if (sc == ScenarioKind::one_up_specified) return Id::one_up_specified;
                if (sc == ScenarioKind::one_up_dicke) return Id::one_up_dicke;
                if (sc == ScenarioKind::two_up_specified) return Id::two_up;
            }
            break;
    }
    throw std::invalid_argument("no closed form covers this observable/N/beta/scenario combination");
}

}  // namespace detail

inline CsvTable execute_run(const RunConfig& cfg) {
    cfg.validate();
    const ObservableKind obs = parse_observable(cfg.observable);
    const Method method = parse_method(cfg.method);
    const double beta = cfg.resolved_beta();
    const DistributionSpec dist = parse_distribution(cfg.distribution);
    const Scenario scenario = parse_scenario(cfg.scenario, cfg.N);
    const auto taus = uniform_grid(cfg.tau_max, cfg.steps);
    const PhotonDensity density = make_density(dist, cfg.tail_tol);

    if (method != Method::closed || obs != ObservableKind::ee) {
        // the dedicated S-observables imply their preparation
        if (obs == ObservableKind::s1 || obs == ObservableKind::s2) {
            if (scenario.kind != ScenarioKind::all_up)
                throw std::invalid_argument(std::string(to_string(obs)) + " requires scenario all_up");
        } else if (obs == ObservableKind::s4) {
            if (scenario.kind != ScenarioKind::all_down)
                throw std::invalid_argument("s4 requires scenario all_down");
        }
    }

    ObservableSeries series;
    switch (method) {
        case Method::exact:
            switch (obs) {
                case ObservableKind::s1: series = s1_all_up(cfg.N, beta, density, taus, cfg.threads); break;
                case ObservableKind::s2: series = s2_all_up(cfg.N, beta, density, taus, cfg.threads); break;
                case ObservableKind::s4: series = s4_all_down(cfg.N, beta, density, taus, cfg.threads); break;
                case ObservableKind::ee:
                    series = ee_general(cfg.N, beta, density, make_tlm_state(scenario, cfg.N), taus,
                                        cfg.threads);
                    break;
            }
            break;
        case Method::afa:
            if (obs == ObservableKind::s1)
                series = s1_afa(cfg.N, beta, density, taus);
            else if (obs == ObservableKind::s2)
                series = s2_afa(cfg.N, beta, density, taus);
            else
                throw std::invalid_argument("method afa supports observables s1 and s2 only");
            break;
        case Method::closed:
            series = eval_closed(detail::closed_form_for(obs, cfg.N, beta, scenario.kind), density,
                                 beta, taus, cfg.N);
            break;
    }

    CsvTable table;
    table.comments = {
        "observable=" + cfg.observable,
        "method=" + cfg.method,
        "scenario=" + cfg.scenario,
        "N=" + std::to_string(cfg.N),
        "distribution=" + to_string(dist),
        "beta=" + format_value(beta),
        "delta=" + format_value(0.25 * beta * beta),
        "tau_max=" + format_value(cfg.tau_max),
        "steps=" + std::to_string(cfg.steps),
        "tail_tol=" + format_value(cfg.tail_tol),
        "threads=" + std::to_string(cfg.threads),
        "n_trunc=" + std::to_string(density.n_trunc()),
        "tail_mass=" + format_value(density.tail_mass),
    };
    table.columns = {"tau", "value_re"};
    const bool complex_out = series.is_complex();
    if (complex_out) table.columns.push_back("value_im");
    table.rows.reserve(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
        std::vector<double> row{taus[i], series.re[i]};
        if (complex_out) row.push_back(series.im[i]);
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace tcm

#endif  // TCM_CONFIG_HPP
