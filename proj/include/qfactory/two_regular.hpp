#pragma once

// Generic two-regular constructions over an underlying trapdoor family.
//
// FromInj turns an injective family g_k that is homomorphic,
// g(a) * g(b) = g(a [] b), into f(x, c) = g(x) for c = 0 and g(x) * g(x0)
// for c = 1. The two preimages of any y are (x1, 0) and (x1 /\ x0, 1).
//
// FromBij pairs two keys of a bijective family: f(x, c) = g_{k_{c+1}}(x).

#include <concepts>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qfactory/error.hpp"
#include "qfactory/rng.hpp"

namespace qfactory {

template <class G>
concept TrapdoorFamily = requires(const typename G::Index& k, const typename G::Trapdoor& t,
                                  const typename G::Domain& x, const typename G::Range& y,
                                  Rng& rng) {
  { G::eval(k, x) } -> std::same_as<typename G::Range>;
  { G::invert(k, t, y) } -> std::same_as<std::optional<typename G::Domain>>;
  { G::sample_domain(k, rng) } -> std::same_as<typename G::Domain>;
  { G::domain_bits(k) } -> std::convertible_to<std::size_t>;
};

// Homomorphic structure: compose is the domain operation, difference its
// inverse (a /\ b = a [] b^{-1}), combine the range operation, identity the
// neutral element of compose.
template <class G>
concept InjectiveHomomorphicFamily =
    TrapdoorFamily<G> && requires(const typename G::Index& k, const typename G::Domain& a,
                                  const typename G::Range& y) {
      { G::compose(a, a) } -> std::same_as<typename G::Domain>;
      { G::difference(a, a) } -> std::same_as<typename G::Domain>;
      { G::combine(y, y) } -> std::same_as<typename G::Range>;
      { G::identity(k) } -> std::same_as<typename G::Domain>;
    };

template <class G>
concept BijectiveFamily = TrapdoorFamily<G> && requires { G::kBijective; };

template <class Domain>
struct TaggedInput {
  Domain x;
  int c = 0;
  bool operator==(const TaggedInput&) const = default;
};

template <InjectiveHomomorphicFamily G>
struct FromInj {
  using Input = TaggedInput<typename G::Domain>;
  using Range = typename G::Range;

  struct Index {
    typename G::Index base;
    Range image_of_x0;
  };
  struct Trapdoor {
    typename G::Trapdoor base;
    typename G::Domain x0;
  };

  // x0 must differ from the identity, otherwise the two preimages coincide.
  static std::pair<Index, Trapdoor> gen_with_x0(typename G::Index base,
                                                typename G::Trapdoor td,
                                                typename G::Domain x0) {
    if (x0 == G::identity(base)) {
      throw Error(ErrorCode::kInvalidArgument, "FromInj requires x0 != 0");
    }
    Range image = G::eval(base, x0);
    return {Index{std::move(base), std::move(image)}, Trapdoor{std::move(td), std::move(x0)}};
  }

  static std::pair<Index, Trapdoor> gen(typename G::Index base, typename G::Trapdoor td,
                                        Rng& rng) {
    typename G::Domain x0 = G::sample_domain(base, rng);
    while (x0 == G::identity(base)) x0 = G::sample_domain(base, rng);
    return gen_with_x0(std::move(base), std::move(td), std::move(x0));
  }

  static Range eval(const Index& k, const Input& in) {
    Range y = G::eval(k.base, in.x);
    return in.c == 0 ? y : G::combine(y, k.image_of_x0);
  }

  // ((x1, 0), (x1 /\ x0, 1)), or nullopt if the underlying inversion fails.
  static std::optional<std::pair<Input, Input>> inv(const Index& k, const Trapdoor& t,
                                                    const Range& y) {
    auto x1 = G::invert(k.base, t.base, y);
    if (!x1) return std::nullopt;
    auto x2 = G::difference(*x1, t.x0);
    return std::make_pair(Input{*x1, 0}, Input{std::move(x2), 1});
  }
};

template <BijectiveFamily G>
struct FromBij {
  using Input = TaggedInput<typename G::Domain>;
  using Range = typename G::Range;

  struct Index {
    typename G::Index first;
    typename G::Index second;
  };
  struct Trapdoor {
    typename G::Trapdoor first;
    typename G::Trapdoor second;
  };

  static std::pair<Index, Trapdoor> gen_from(std::pair<typename G::Index, typename G::Trapdoor> a,
                                             std::pair<typename G::Index, typename G::Trapdoor> b) {
    return {Index{std::move(a.first), std::move(b.first)},
            Trapdoor{std::move(a.second), std::move(b.second)}};
  }

  static Range eval(const Index& k, const Input& in) {
    return in.c == 0 ? G::eval(k.first, in.x) : G::eval(k.second, in.x);
  }

  static std::optional<std::pair<Input, Input>> inv(const Index& k, const Trapdoor& t,
                                                    const Range& y) {
    auto x1 = G::invert(k.first, t.first, y);
    auto x2 = G::invert(k.second, t.second, y);
    if (!x1 || !x2) return std::nullopt;
    return std::make_pair(Input{*x1, 0}, Input{*x2, 1});
  }
};

// Insecure desk-scale families. They satisfy the structural preconditions of
// the constructions above so that whole protocol runs fit in a state vector;
// none of them is one-way.

// g(x) = M x over GF(2), M a random invertible dim x dim bit matrix.
struct ToyLinear {
  static constexpr bool kInsecureToy = true;
  static constexpr int kMaxDim = 23;

  using Domain = std::uint32_t;
  using Range = std::uint32_t;

  struct Index {
    int dim = 0;
    std::vector<std::uint32_t> columns;  // column j = M e_j
  };
  struct Trapdoor {
    std::vector<std::uint32_t> inverse_columns;
  };

  static std::pair<Index, Trapdoor> gen(int dim, Rng& rng);
  static Range eval(const Index& k, Domain x);
  static std::optional<Domain> invert(const Index& k, const Trapdoor& t, Range y);
  static Domain sample_domain(const Index& k, Rng& rng);
  static std::size_t domain_bits(const Index& k) { return static_cast<std::size_t>(k.dim); }

  static Domain compose(Domain a, Domain b) { return a ^ b; }
  static Domain difference(Domain a, Domain b) { return a ^ b; }
  static Range combine(Range a, Range b) { return a ^ b; }
  static Domain identity(const Index&) { return 0; }
};

// Random permutation of {0,1}^dim stored as a table.
struct ToyPermutation {
  static constexpr bool kInsecureToy = true;
  static constexpr bool kBijective = true;
  static constexpr int kMaxDim = 19;

  using Domain = std::uint32_t;
  using Range = std::uint32_t;

  struct Index {
    int dim = 0;
    std::vector<std::uint32_t> table;
  };
  struct Trapdoor {
    std::vector<std::uint32_t> inverse;
  };

  static std::pair<Index, Trapdoor> gen(int dim, Rng& rng);
  static std::pair<Index, Trapdoor> identity_permutation(int dim);
  static Range eval(const Index& k, Domain x) { return k.table.at(x); }
  static std::optional<Domain> invert(const Index& k, const Trapdoor& t, Range y);
  static Domain sample_domain(const Index& k, Rng& rng);
  static std::size_t domain_bits(const Index& k) { return static_cast<std::size_t>(k.dim); }
};

using ToyLinearTwoRegular = FromInj<ToyLinear>;
using ToyPermTwoRegular = FromBij<ToyPermutation>;

}  // namespace qfactory
