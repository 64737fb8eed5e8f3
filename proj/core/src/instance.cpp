#include "sird/instance.hpp"

#include <cmath>

namespace sird {

DistortionSpec DistortionSpec::hamming(const Alphabet& x) {
    DistortionSpec d;
    d.xhat = x;
    d.xhat.name = x.name + "_hat";
    d.delta.assign(x.size(), std::vector<double>(x.size(), 1.0));
    for (std::size_t i = 0; i < x.size(); ++i) d.delta[i][i] = 0.0;
    return d;
}

DistortionSpec DistortionSpec::from_psi(Alphabet codomain, std::vector<std::size_t> table) {
    DistortionSpec d;
    d.xhat = codomain;
    d.psi_codomain = codomain;
    d.psi_table = std::move(table);
    d.delta.assign(d.psi_table.size(), std::vector<double>(codomain.size(), 1.0));
    for (std::size_t x = 0; x < d.psi_table.size(); ++x) {
        if (d.psi_table[x] >= codomain.size())
            throw ValidationError("psi table image out of range");
        d.delta[x][d.psi_table[x]] = 0.0;
    }
    return d;
}

std::size_t SourceInstance::x_card() const {
    std::size_t n = 1;
    for (const auto& a : x_axes) n *= joint.axis(a).size();
    return n;
}

const DistortionSpec& SourceInstance::distortion(std::size_t receiver) const {
    if (receiver == 0 || receiver > distortions.size())
        throw OutOfRange("no distortion for receiver " + std::to_string(receiver));
    return distortions[receiver - 1];
}

bool SourceInstance::psi_present(std::size_t receiver) const {
    return distortion(receiver).deterministic();
}

void SourceInstance::validate() const {
    if (x_axes.empty()) throw ValidationError("instance has no source axes");
    for (const auto& a : x_axes) (void)joint.axis_index(a);
    for (const auto& a : side_axes) (void)joint.axis_index(a);
    if (distortions.size() != side_axes.size())
        throw ValidationError("one distortion per receiver required");
    const std::size_t xc = x_card();
    for (std::size_t r = 0; r < distortions.size(); ++r) {
        const auto& d = distortions[r];
        if (d.delta.size() != xc)
            throw ValidationError("distortion rows do not match source alphabet");
        for (const auto& row : d.delta) {
            if (row.size() != d.xhat.size())
                throw ValidationError("distortion columns do not match xhat alphabet");
            bool normal = false;
            for (double v : row) {
                if (v < 0.0) throw ValidationError("negative distortion entry");
                if (v == 0.0) normal = true;
            }
            if (!normal) throw ValidationError("distortion not normal: a row has no zero");
        }
        if (d.deterministic()) {
            if (d.psi_table.size() != xc)
                throw ValidationError("psi table does not match source alphabet");
            for (std::size_t x = 0; x < xc; ++x)
                for (std::size_t h = 0; h < d.xhat.size(); ++h) {
                    double want = (d.psi_table[x] == h) ? 0.0 : 1.0;
                    if (d.delta[x][h] != want)
                        throw ValidationError("deterministic distortion must be 0/1 from psi");
                }
        }
    }
}

std::string xtilde_name(std::size_t receiver) { return "Xt" + std::to_string(receiver); }

JointPMF with_xtilde(const SourceInstance& inst, std::size_t receiver, const JointPMF* base) {
    const DistortionSpec& d = inst.distortion(receiver);
    if (!d.deterministic())
        throw PsiMissing("receiver " + std::to_string(receiver) + " has no psi map");
    const JointPMF& j = base ? *base : inst.joint;
    Alphabet cod = *d.psi_codomain;
    cod.name = xtilde_name(receiver);
    return j.derive_grouped(inst.x_axes, cod, d.psi_table);
}

} // namespace sird
