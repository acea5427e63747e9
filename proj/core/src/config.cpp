#include "rydpol/config.hpp"

#include <cmath>
#include <set>

#include "json.hpp"

#include "rydpol/error.hpp"

namespace rydpol
{
    namespace
    {
        using json = nlohmann::json;

        const std::set<std::string> known_keys = {
            "solver", "alpha", "rb", "amplitude", "c_ratio", "interactions", "delta", "delta1", "delta2",
            "omega", "v12_over_v11", "rabi", "mode", "lossless", "include_vc", "c_ratios", "hr", "hR", "n",
            "beams", "components", "map_stride", "sweep"};

        double get_number(const json& j, const std::string& key)
        {
            const json& v = j.at(key);
            if (!v.is_number())
                throw ConfigError(key, "expected a number");
            const double x = v.get<double>();
            if (!std::isfinite(x))
                throw ConfigError(key, "must be finite");
            return x;
        }

        double get_positive(const json& j, const std::string& key)
        {
            const double x = get_number(j, key);
            if (!(x > 0.0))
                throw ConfigError(key, "must be positive");
            return x;
        }

        bool get_bool(const json& j, const std::string& key)
        {
            if (!j.at(key).is_boolean())
                throw ConfigError(key, "expected true or false");
            return j.at(key).get<bool>();
        }

        std::string get_string(const json& j, const std::string& key)
        {
            if (!j.at(key).is_string())
                throw ConfigError(key, "expected a string");
            return j.at(key).get<std::string>();
        }

        Matrix2c parse_rabi(const json& j)
        {
            const std::string key = "rabi";
            const json& m = j.at(key);
            if (!m.is_array() || m.size() != 2)
                throw ConfigError(key, "expected a 2x2 array of [re, im] pairs");
            Matrix2c out;
            for (int r = 0; r < 2; ++r)
            {
                if (!m[r].is_array() || m[r].size() != 2)
                    throw ConfigError(key, "expected a 2x2 array of [re, im] pairs");
                for (int c = 0; c < 2; ++c)
                {
                    const json& z = m[r][c];
                    if (z.is_number())
                        out(r, c) = z.get<double>();
                    else if (z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number())
                        out(r, c) = cplx(z[0].get<double>(), z[1].get<double>());
                    else
                        throw ConfigError(key, "entries must be numbers or [re, im] pairs");
                }
            }
            return out;
        }

        SweepSpec parse_sweep(const json& j)
        {
            const json& s = j.at("sweep");
            if (!s.is_object())
                throw ConfigError("sweep", "expected an object");
            SweepSpec out;
            for (const auto& [k, v] : s.items())
            {
                const std::string key = "sweep." + k;
                if (k == "values")
                {
                    if (!v.is_array() || v.empty())
                        throw ConfigError(key, "expected a non-empty array of numbers");
                    std::vector<double> vals;
                    for (const auto& x : v)
                    {
                        if (!x.is_number() || !std::isfinite(x.get<double>()))
                            throw ConfigError(key, "entries must be finite numbers");
                        vals.push_back(x.get<double>());
                    }
                    out.values = std::move(vals);
                }
                else if (k == "from" || k == "to" || k == "step")
                {
                    if (!v.is_number() || !std::isfinite(v.get<double>()))
                        throw ConfigError(key, "expected a finite number");
                    (k == "from" ? out.from : k == "to" ? out.to : out.step) = v.get<double>();
                }
                else
                    throw ConfigError(key, "unknown key");
            }
            if (!out.values)
            {
                if (!(out.step > 0.0))
                    throw ConfigError("sweep.step", "must be positive");
                if (out.to < out.from)
                    throw ConfigError("sweep.to", "must not be below sweep.from");
            }
            return out;
        }

        void require_solver(const json& j, const std::string& key, Solver actual, std::initializer_list<Solver> allowed)
        {
            if (!j.contains(key))
                return;
            for (Solver s : allowed)
                if (s == actual)
                    return;
            throw ConfigError(key, std::string("not used by solver '") + to_string(actual) + "'");
        }
    }

    const char* to_string(Solver s)
    {
        switch (s)
        {
        case Solver::equal: return "equal";
        case Solver::full: return "full";
        case Solver::ladder2: return "ladder2";
        }
        return "?";
    }

    std::vector<double> SweepSpec::detunings() const
    {
        if (values)
            return *values;
        const auto count = static_cast<long>(std::floor((to - from) / step + 1e-9)) + 1;
        std::vector<double> d;
        d.reserve(static_cast<std::size_t>(count));
        for (long k = 0; k < count; ++k)
            d.push_back(from + static_cast<double>(k) * step);
        return d;
    }

    RunConfig parse_config(const std::string& text)
    {
        json j;
        try
        {
            j = json::parse(text);
        }
        catch (const json::parse_error& e)
        {
            throw ConfigError("", std::string("malformed JSON: ") + e.what());
        }
        if (!j.is_object())
            throw ConfigError("", "configuration must be a JSON object");
        for (const auto& [k, v] : j.items())
            if (!known_keys.count(k))
                throw ConfigError(k, "unknown key");

        RunConfig c;
        if (!j.contains("solver"))
            throw ConfigError("solver", "missing (equal | full | ladder2)");
        const std::string solver = get_string(j, "solver");
        if (solver == "equal")
            c.solver = Solver::equal;
        else if (solver == "full")
            c.solver = Solver::full;
        else if (solver == "ladder2")
            c.solver = Solver::ladder2;
        else
            throw ConfigError("solver", "expected equal, full or ladder2, got '" + solver + "'");
        c.n = c.solver == Solver::ladder2 ? default_ladder_nodes : default_full_nodes;

        using S = Solver;
        require_solver(j, "mode", c.solver, {S::equal});
        require_solver(j, "lossless", c.solver, {S::equal});
        require_solver(j, "hr", c.solver, {S::equal});
        require_solver(j, "hR", c.solver, {S::equal});
        require_solver(j, "sweep", c.solver, {S::equal});
        require_solver(j, "include_vc", c.solver, {S::full});
        require_solver(j, "c_ratios", c.solver, {S::full});
        require_solver(j, "n", c.solver, {S::full, S::ladder2});
        require_solver(j, "beams", c.solver, {S::full, S::ladder2});
        require_solver(j, "components", c.solver, {S::full, S::ladder2});
        require_solver(j, "map_stride", c.solver, {S::full, S::ladder2});

        SchemeParams& p = c.params;
        if (j.contains("alpha"))
            p.alpha = get_positive(j, "alpha");
        if (j.contains("rb"))
            p.rb = get_positive(j, "rb");
        if (j.contains("amplitude"))
            p.amplitude = get_positive(j, "amplitude");
        if (j.contains("c_ratio"))
            p.c_ratio = get_positive(j, "c_ratio");
        if (j.contains("interactions"))
            p.interactions = get_bool(j, "interactions");

        if (j.contains("delta") && (j.contains("delta1") || j.contains("delta2")))
            throw ConfigError("delta", "give either delta or delta1/delta2, not both");
        if (j.contains("delta"))
            p.delta1 = p.delta2 = get_number(j, "delta");
        if (j.contains("delta1"))
            p.delta1 = get_number(j, "delta1");
        if (j.contains("delta2"))
            p.delta2 = get_number(j, "delta2");

        if (j.contains("rabi") && (j.contains("omega") || j.contains("v12_over_v11")))
            throw ConfigError("rabi", "give either rabi or omega/v12_over_v11, not both");
        if (j.contains("omega"))
            c.omega = get_positive(j, "omega");
        if (j.contains("v12_over_v11"))
        {
            const double ratio = get_number(j, "v12_over_v11");
            if (std::abs(ratio) > 1.0)
                throw ConfigError("v12_over_v11", "must lie in [-1, 1]");
            c.v12_over_v11 = ratio;
        }
        if (j.contains("rabi"))
            p.rabi = parse_rabi(j);
        else if (c.v12_over_v11)
            p.rabi = rabi_for_velocity_ratio(*c.v12_over_v11, c.omega);
        else
            p.rabi = c.omega * Matrix2c::Identity();

        if (j.contains("mode"))
        {
            const std::string m = get_string(j, "mode");
            if (m != "piecewise" && m != "smooth")
                throw ConfigError("mode", "expected piecewise or smooth, got '" + m + "'");
            c.mode = closed_mode_from_string(m);
        }
        if (j.contains("lossless"))
            c.lossless = get_bool(j, "lossless");
        if (j.contains("include_vc"))
            c.include_vc = get_bool(j, "include_vc");
        if (j.contains("c_ratios"))
        {
            const json& v = j.at("c_ratios");
            if (!v.is_array())
                throw ConfigError("c_ratios", "expected an array of positive numbers");
            for (const auto& x : v)
            {
                if (!x.is_number() || !(x.get<double>() > 0.0) || !std::isfinite(x.get<double>()))
                    throw ConfigError("c_ratios", "entries must be positive finite numbers");
                c.c_ratios.push_back(x.get<double>());
            }
        }
        if (j.contains("hr"))
            c.hr = get_positive(j, "hr");
        if (j.contains("hR"))
            c.hR = get_positive(j, "hR");
        if (j.contains("n"))
        {
            const json& v = j.at("n");
            if (!v.is_number_integer() || v.get<long long>() < 2)
                throw ConfigError("n", "expected an integer >= 2");
            c.n = static_cast<std::size_t>(v.get<long long>());
        }
        if (j.contains("map_stride"))
        {
            const json& v = j.at("map_stride");
            if (!v.is_number_integer() || v.get<long long>() < 0)
                throw ConfigError("map_stride", "expected a non-negative integer");
            c.map_stride = static_cast<std::size_t>(v.get<long long>());
        }
        if (j.contains("beams"))
        {
            const std::string b = get_string(j, "beams");
            if (b == "both")
                c.beams = InputBeams::both;
            else if (b == "first")
                c.beams = InputBeams::first_only;
            else
                throw ConfigError("beams", "expected both or first, got '" + b + "'");
        }
        if (j.contains("components"))
        {
            const json& v = j.at("components");
            if (!v.is_array() || v.empty())
                throw ConfigError("components", "expected a non-empty array of [j, l] pairs");
            c.components.clear();
            for (const auto& pair : v)
            {
                if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer())
                    throw ConfigError("components", "entries must be [j, l] integer pairs");
                const int a = pair[0].get<int>();
                const int b = pair[1].get<int>();
                if (a < 1 || a > 2 || b < 1 || b > 2)
                    throw ConfigError("components", "indices must be 1 or 2");
                c.components.emplace_back(a, b);
            }
        }
        if (j.contains("sweep"))
            c.sweep = parse_sweep(j);

        try
        {
            p.validate();
        }
        catch (const PreconditionError& e)
        {
            throw ConfigError("rabi", e.what());
        }
        // Solver preconditions.
        if (c.solver == Solver::equal && p.delta1 != p.delta2)
            throw ConfigError("delta2", "equal-detuning solver requires delta1 == delta2");
        if (c.solver == Solver::ladder2 && !p.is_double_ladder())
            throw ConfigError(j.contains("v12_over_v11") ? "v12_over_v11" : "rabi",
                              "double-ladder solver requires Omega_12 = Omega_21 = 0 and Omega_11 = Omega_22");
        return c;
    }

    std::string serialize_config(const RunConfig& c)
    {
        const SchemeParams& p = c.params;
        json j;
        j["solver"] = to_string(c.solver);
        j["alpha"] = p.alpha;
        j["rb"] = p.rb;
        j["amplitude"] = p.amplitude;
        j["c_ratio"] = p.c_ratio;
        j["interactions"] = p.interactions;
        j["delta1"] = p.delta1;
        j["delta2"] = p.delta2;
        if (c.v12_over_v11)
        {
            j["omega"] = c.omega;
            j["v12_over_v11"] = *c.v12_over_v11;
        }
        else
        {
            json rabi = json::array();
            for (int r = 0; r < 2; ++r)
            {
                json row = json::array();
                for (int k = 0; k < 2; ++k)
                    row.push_back({p.rabi(r, k).real(), p.rabi(r, k).imag()});
                rabi.push_back(row);
            }
            j["rabi"] = rabi;
        }
        switch (c.solver)
        {
        case Solver::equal:
        {
            j["mode"] = to_string(c.mode);
            j["lossless"] = c.lossless;
            j["hr"] = c.hr;
            j["hR"] = c.hR;
            json s;
            if (c.sweep.values)
                s["values"] = *c.sweep.values;
            else
                s = {{"from", c.sweep.from}, {"to", c.sweep.to}, {"step", c.sweep.step}};
            j["sweep"] = s;
            break;
        }
        case Solver::full:
            j["include_vc"] = c.include_vc;
            j["c_ratios"] = c.c_ratios;
            [[fallthrough]];
        case Solver::ladder2:
        {
            j["n"] = c.n;
            j["beams"] = c.beams == InputBeams::both ? "both" : "first";
            json comps = json::array();
            for (const auto& [a, b] : c.components)
                comps.push_back({a, b});
            j["components"] = comps;
            j["map_stride"] = c.map_stride;
            break;
        }
        }
        return j.dump(2) + "\n";
    }
}
