// coherent.hpp — Coherent-state overlap algebra shared by the dyad machinery

#pragma once

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

namespace oscnet {

using cplx = std::complex<double>;

// log<b|a> in closed form: -|a|^2/2 - |b|^2/2 + conj(b)*a.
// All complex powers <b|a>^p go through this, never through a numeric
// std::log of the overlap, so phase winding cannot hit a branch cut.
inline cplx log_coherent_overlap(cplx bra, cplx ket) {
    return -0.5 * std::norm(ket) - 0.5 * std::norm(bra) + std::conj(bra) * ket;
}

inline cplx coherent_overlap(cplx bra, cplx ket) {
    return std::exp(log_coherent_overlap(bra, ket));
}

// <b|a>^p for real exponent p
inline cplx coherent_overlap_pow(cplx bra, cplx ket, double p) {
    return std::exp(p * log_coherent_overlap(bra, ket));
}

// Normalized two-term coherent superposition sum_i w_i |amp_i>, used as a
// projection target when evaluating find-state probabilities.
struct CoherentSuperposition {
    struct Term {
        cplx weight;
        cplx amplitude;
    };
    std::vector<Term> terms;

    // <psi|x> for a coherent |x>
    cplx bra_coherent(cplx x) const {
        cplx acc = 0.0;
        for (const auto& term : terms)
            acc += std::conj(term.weight) * coherent_overlap(term.amplitude, x);
        return acc;
    }

    double norm_squared() const {
        cplx acc = 0.0;
        for (const auto& a : terms)
            for (const auto& b : terms)
                acc += std::conj(a.weight) * b.weight * coherent_overlap(a.amplitude, b.amplitude);
        return acc.real();
    }

    static CoherentSuperposition coherent(cplx amplitude) {
        return {{{1.0, amplitude}}};
    }

    // N(|alpha> + s|-alpha>), s = +-1, normalized
    static CoherentSuperposition cat(cplx alpha, int relative_sign) {
        CoherentSuperposition psi{{{1.0, alpha}, {double(relative_sign), -alpha}}};
        const double n2 = psi.norm_squared();
        const double scale = 1.0 / std::sqrt(n2);
        for (auto& term : psi.terms) term.weight *= scale;
        return psi;
    }
};

} // namespace oscnet
