#pragma once

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kpq {

class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A closed compact surface, encoded as orientability plus a genus count:
/// handles if orientable, crosscaps otherwise. The Euler characteristic is
/// derived, never stored, so parity is always unambiguous.
struct surface {
    bool orientable = true;
    int genus = 0;

    friend auto operator<=>(const surface&, const surface&) = default;

    int euler_characteristic() const { return orientable ? 2 - 2 * genus : 2 - genus; }
    int euler_genus() const { return 2 - euler_characteristic(); }

    std::string to_string() const { return (orientable ? "S" : "N") + std::to_string(genus); }

    static surface sphere() { return {true, 0}; }
    static surface torus() { return {true, 1}; }
    static surface projective_plane() { return {false, 1}; }
    static surface klein_bottle() { return {false, 2}; }
};

inline surface make_surface(bool orientable, int genus) {
    if (genus < 0) throw error("surface genus must be non-negative");
    if (!orientable && genus < 1) throw error("a non-orientable surface needs at least one crosscap");
    return surface{orientable, genus};
}

/// Parses the textual form used everywhere: "S<g>" orientable, "N<k>" non-orientable.
inline surface parse_surface(std::string_view text) {
    if (text.size() < 2 || (text[0] != 'S' && text[0] != 'N'))
        throw error("surface must look like S<g> or N<k>, got '" + std::string(text) + "'");
    long g = 0;
    for (std::size_t i = 1; i < text.size(); ++i) {
        char c = text[i];
        if (c < '0' || c > '9')
            throw error("bad surface genus in '" + std::string(text) + "'");
        g = g * 10 + (c - '0');
        if (g > 1000000) throw error("surface genus out of range");
    }
    return make_surface(text[0] == 'S', static_cast<int>(g));
}

inline int euler_characteristic(const surface& s) { return s.euler_characteristic(); }
inline int euler_genus(const surface& s) { return s.euler_genus(); }

/// Orientable genus of K_{m,n} (m, n >= 2): ceil((m-2)(n-2)/4).
inline int kmn_genus(int m, int n) {
    if (m < 2 || n < 2) throw error("kmn_genus requires m, n >= 2");
    return ((m - 2) * (n - 2) + 3) / 4;
}

/// Non-orientable genus (crosscap number) of K_{m,n} (m, n >= 3): ceil((m-2)(n-2)/2).
inline int kmn_demigenus(int m, int n) {
    if (m < 3 || n < 3) throw error("kmn_demigenus requires m, n >= 3");
    return ((m - 2) * (n - 2) + 1) / 2;
}

/// Euler-formula lower bound on the Euler genus of any surface hosting a
/// bipartite graph with v vertices and e edges: girth >= 4 forces F <= E/2,
/// so eg >= ceil(e/2 - v + 2). Clamped at 0 for tiny graphs.
inline int bipartite_euler_bound(int v, int e) {
    if (v < 3 || e < 1) return 0;
    int twice = e - 2 * v + 4;  // 2 * (e/2 - v + 2)
    int bound = (twice + 1) / 2;
    return bound > 0 ? bound : 0;
}

/// True iff sigma can be obtained from gamma by attaching handles/crosscaps
/// into faces of a cellular embedding on gamma. Both orientable: genus can
/// only grow. Converting an orientable surface to a non-orientable one costs
/// at least one crosscap, hence the +1. A non-orientable surface can never
/// become orientable.
inline bool attachable(const surface& gamma, const surface& sigma) {
    if (sigma.orientable) return gamma.orientable && sigma.genus >= gamma.genus;
    int need = gamma.euler_genus() + (gamma.orientable ? 1 : 0);
    return sigma.euler_genus() >= need;
}

}  // namespace kpq
