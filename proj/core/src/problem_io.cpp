#include "sird/problem_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sird {

using nlohmann::json;

namespace {

Alphabet alphabet_from_json(const json& a) {
    Alphabet al;
    al.name = a.at("name").get<std::string>();
    if (a.contains("symbols")) {
        al.symbols = a.at("symbols").get<std::vector<std::string>>();
    } else {
        al = Alphabet::indexed(al.name, a.at("size").get<std::size_t>());
    }
    return al;
}

JointPMF extend_independent(const JointPMF* acc, const Alphabet& a,
                            const std::vector<double>& pmf) {
    JointPMF marginal({a}, pmf);
    if (!acc) return marginal;
    return JointPMF::product(*acc, marginal);
}

/// XOR of two same-size indexed variables as a deterministic channel.
Channel xor_channel(const Alphabet& a, const Alphabet& b, const std::string& out) {
    if (a.size() != b.size()) throw ValidationError("xor: operand alphabets differ in size");
    const std::size_t n = a.size();
    std::vector<double> p(n * n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) p[(i * n + k) * n + ((i + k) % n)] = 1.0;
    return Channel({a, b}, Alphabet::indexed(out, n), std::move(p));
}

DistortionSpec receiver_from_json(const json& r, const SourceInstance& partial,
                                  const JointPMF& joint) {
    const std::string kind = r.at("distortion").get<std::string>();
    const std::size_t xc = [&] {
        std::size_t n = 1;
        for (const auto& a : partial.x_axes) n *= joint.axis(a).size();
        return n;
    }();

    if (kind == "hamming") {
        if (partial.x_axes.size() != 1)
            throw ValidationError("hamming preset needs a single source axis");
        return DistortionSpec::hamming(joint.axis(partial.x_axes[0]));
    }
    if (kind == "component-hamming") {
        const std::string comp = r.at("component").get<std::string>();
        std::size_t pos = partial.x_axes.size();
        for (std::size_t i = 0; i < partial.x_axes.size(); ++i)
            if (partial.x_axes[i] == comp) pos = i;
        if (pos == partial.x_axes.size())
            throw ValidationError("component-hamming: unknown component " + comp);
        // psi projects the flattened source (row-major over x_axes) onto comp
        std::vector<std::size_t> dims;
        for (const auto& a : partial.x_axes) dims.push_back(joint.axis(a).size());
        std::vector<std::size_t> table(xc);
        for (std::size_t flat = 0; flat < xc; ++flat) {
            std::size_t rem = flat, val = 0;
            for (std::size_t k = dims.size(); k-- > 0;) {
                std::size_t d = rem % dims[k];
                rem /= dims[k];
                if (k == pos) val = d;
            }
            table[flat] = val;
        }
        Alphabet cod = joint.axis(comp);
        cod.name = comp + "_hat";
        return DistortionSpec::from_psi(cod, std::move(table));
    }
    if (kind == "deterministic") {
        Alphabet cod;
        cod.name = "Xt_hat";
        if (r.at("xhat").is_number()) {
            cod = Alphabet::indexed(cod.name, r.at("xhat").get<std::size_t>());
        } else {
            cod.symbols = r.at("xhat").get<std::vector<std::string>>();
        }
        return DistortionSpec::from_psi(cod, r.at("psi").get<std::vector<std::size_t>>());
    }
    if (kind == "matrix") {
        DistortionSpec d;
        d.xhat.name = "Xhat";
        if (r.at("xhat").is_number()) {
            d.xhat = Alphabet::indexed(d.xhat.name, r.at("xhat").get<std::size_t>());
        } else {
            d.xhat.symbols = r.at("xhat").get<std::vector<std::string>>();
        }
        d.delta = r.at("delta").get<std::vector<std::vector<double>>>();
        return d;
    }
    throw ParseError("unknown distortion preset: " + kind);
}

SourceInstance from_json(const json& doc, const std::string& origin) {
    SourceInstance inst{JointPMF({Alphabet::indexed("_", 1)}, {1.0}), {}, {}, {}, ""};
    inst.name = doc.value("name", origin);
    inst.x_axes = doc.at("source").get<std::vector<std::string>>();
    inst.side_axes = doc.at("side").get<std::vector<std::string>>();

    if (doc.contains("joint")) {
        std::vector<Alphabet> axes;
        for (const auto& a : doc.at("alphabets")) axes.push_back(alphabet_from_json(a));
        inst.joint = JointPMF(axes, doc.at("joint").get<std::vector<double>>());
    } else if (doc.contains("variables")) {
        const JointPMF* acc = nullptr;
        JointPMF current({Alphabet::indexed("_", 1)}, {1.0});
        bool have = false;
        for (const auto& v : doc.at("variables")) {
            const std::string name = v.at("name").get<std::string>();
            const std::string type = v.at("type").get<std::string>();
            if (type == "uniform") {
                std::size_t n = v.value("size", std::size_t{2});
                current = extend_independent(have ? &current : nullptr,
                                             Alphabet::indexed(name, n),
                                             std::vector<double>(n, 1.0 / double(n)));
            } else if (type == "bernoulli") {
                double p = v.at("p").get<double>(); // P[symbol "1"]
                current = extend_independent(have ? &current : nullptr,
                                             Alphabet::binary(name), {1.0 - p, p});
            } else if (type == "pmf") {
                Alphabet a = v.contains("symbols")
                                 ? Alphabet{name, v.at("symbols").get<std::vector<std::string>>()}
                                 : Alphabet::indexed(name, v.at("probs").size());
                current = extend_independent(have ? &current : nullptr, a,
                                             v.at("probs").get<std::vector<double>>());
            } else if (type == "xor") {
                auto of = v.at("of").get<std::vector<std::string>>();
                if (of.size() != 2) throw ParseError("xor takes exactly two operands");
                current = current.attach_auxiliary(
                    xor_channel(current.axis(of[0]), current.axis(of[1]), name));
            } else if (type == "bsc") {
                current = current.attach_auxiliary(Channel::bsc(
                    current.axis(v.at("of").get<std::string>()), name,
                    v.at("crossover").get<double>()));
            } else if (type == "bec") {
                current = current.attach_auxiliary(Channel::bec(
                    current.axis(v.at("of").get<std::string>()), name,
                    v.at("erasure").get<double>()));
            } else if (type == "map") {
                const Alphabet& dom = current.axis(v.at("of").get<std::string>());
                auto table = v.at("table").get<std::vector<std::size_t>>();
                std::size_t cod = v.contains("size")
                                      ? v.at("size").get<std::size_t>()
                                      : 1 + *std::max_element(table.begin(), table.end());
                current = current.derive_variable(
                    DeterministicMap(dom, Alphabet::indexed("tmp", cod), table), name);
            } else if (type == "channel") {
                const Alphabet& in = current.axis(v.at("of").get<std::string>());
                auto probs = v.at("probs").get<std::vector<double>>();
                std::size_t out_n = probs.size() / in.size();
                current = current.attach_auxiliary(
                    Channel({in}, Alphabet::indexed(name, out_n), std::move(probs)));
            } else {
                throw ParseError("unknown variable type: " + type);
            }
            have = true;
            (void)acc;
        }
        // keep only the declared source and side axes, in canonical order
        std::vector<std::string> keep = inst.x_axes;
        keep.insert(keep.end(), inst.side_axes.begin(), inst.side_axes.end());
        inst.joint = current.marginalize(keep);
    } else {
        throw ParseError(origin + ": problem file needs either \"joint\" or \"variables\"");
    }

    for (const auto& r : doc.at("receivers"))
        inst.distortions.push_back(receiver_from_json(r, inst, inst.joint));
    inst.validate();
    return inst;
}

} // namespace

SourceInstance parse_problem_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
    try {
        return from_json(doc, origin);
    } catch (const json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

SourceInstance parse_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem_text(ss.str(), path);
}

namespace {

json dense_json(const SourceInstance& inst) {
    json doc;
    doc["name"] = inst.name;
    doc["source"] = inst.x_axes;
    doc["side"] = inst.side_axes;
    json alphabets = json::array();
    for (const auto& a : inst.joint.axes())
        alphabets.push_back({{"name", a.name}, {"symbols", a.symbols}});
    doc["alphabets"] = alphabets;
    doc["joint"] = std::vector<double>(inst.joint.probs().begin(), inst.joint.probs().end());
    json receivers = json::array();
    for (const auto& d : inst.distortions) {
        json r;
        if (d.deterministic()) {
            r["distortion"] = "deterministic";
            r["xhat"] = d.xhat.symbols;
            r["psi"] = d.psi_table;
        } else {
            r["distortion"] = "matrix";
            r["xhat"] = d.xhat.symbols;
            r["delta"] = d.delta;
        }
        receivers.push_back(r);
    }
    doc["receivers"] = receivers;
    return doc;
}

} // namespace

std::string serialize_instance(const SourceInstance& inst) { return dense_json(inst).dump(2); }

std::string instance_hash(const SourceInstance& inst) {
    const std::string s = serialize_instance(inst);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string RunRecord::to_json() const {
    json j;
    j["command"] = command;
    j["instance_hash"] = instance_hash;
    j["seed"] = seed;
    j["options"] = options.empty() ? json::object() : json::parse(options);
    j["results"] = results.empty() ? json::object() : json::parse(results);
    j["version"] = version;
    j["wall_ms"] = wall_ms;
    return j.dump(2);
}

std::string format_sig(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\r\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_sig(row[i]);
        out << "\r\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

std::string toolkit_version() { return "0.1.0"; }

} // namespace sird
