#pragma once

#include <compare>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ergoforge/rational.hpp"

namespace ergoforge {

// Canonical normal-form word. Interpretation depends on the owning context:
// free groups store freely reduced letter strings (letter +i-1 / -(i+1) for
// generator i and its inverse), free abelian groups store exponent vectors,
// table-backed groups store a single element index.
struct Element {
  std::vector<int> w;
  auto operator<=>(const Element&) const = default;
};

struct FiniteGroupTable {
  std::vector<std::string> names;
  std::vector<std::vector<int>> mul;  // mul[g][h] = index of g*h
  std::vector<int> inv;
  int id = 0;
  // one_line[g] is the permutation of {0..k-1} for symmetric-group tables;
  // empty otherwise.
  std::vector<std::vector<int>> one_line;

  int size() const { return static_cast<int>(mul.size()); }
  void validate() const;  // associativity, identity, inverse laws on the full table

  static FiniteGroupTable cyclic(int n);
  static FiniteGroupTable symmetric(int k);  // elements in lex one-line order, identity first
  static FiniteGroupTable from_table(std::vector<std::string> names,
                                     std::vector<std::vector<int>> mul);
};

enum class GroupKind { free_group, free_abelian, finite, free_quotient };

class GroupContext {
 public:
  GroupKind kind = GroupKind::free_group;
  std::vector<std::string> gen_names;
  int rank = 0;                 // generator count (free) / rank (abelian)
  FiniteGroupTable table;       // finite kinds
  std::vector<int> gen_elems;   // finite kinds: generator element indices

  static GroupContext free_group_ctx(int k, std::vector<std::string> names = {});
  static GroupContext free_abelian_ctx(int d, std::vector<std::string> names = {});
  static GroupContext finite_ctx(FiniteGroupTable t, std::vector<int> gens,
                                 std::vector<std::string> gen_names = {});
  // Quotient of the free group on |images| generators; the normal form of a
  // word is its evaluation through the generator images.
  static GroupContext free_quotient_ctx(FiniteGroupTable t, std::vector<int> images,
                                        std::vector<std::string> names = {});

  int generator_count() const;
  Element identity() const;
  Element generator(int i) const;
  Element multiply(const Element& g, const Element& h) const;
  Element inverse(const Element& g) const;
  bool is_identity(const Element& g) const;
  Element power(const Element& g, long long n) const;

  // Words in generator letters (+i+1 / -(i+1)); from_letters reduces to the
  // normal form, to_letters produces some word evaluating to g.
  Element from_letters(const std::vector<int>& letters) const;
  std::vector<int> to_letters(const Element& g) const;

  std::string to_string(const Element& g) const;
  Element parse_element(const std::string& s) const;

  void check_element(const Element& g) const;  // throws on malformed words
  bool table_backed() const {
    return kind == GroupKind::finite || kind == GroupKind::free_quotient;
  }

 private:
  // finite kinds: a generator word per element, built by deterministic BFS
  std::vector<std::vector<int>> elem_words_;
  void build_elem_words();
};

// Ordered finite element list; the stored order drives every downstream
// lexicographic construction.
struct Window {
  std::vector<Element> elems;
  bool is_ball = false;

  static Window of(std::vector<Element> elems, bool is_ball = false);
  int find(const Element& g) const;  // -1 when absent
  int at(const Element& g) const;    // throws when absent
  size_t size() const { return elems.size(); }
  bool operator==(const Window& o) const { return elems == o.elems; }

 private:
  std::map<std::vector<int>, int> idx_;
};

Window cayley_ball(const GroupContext& ctx, const std::vector<Element>& S, int r);
// Ball over generators and their inverses.
Window cayley_ball(const GroupContext& ctx, int r);
std::vector<Element> symmetric_generating_set(const GroupContext& ctx);

// Finite-index subgroup Lambda = hom^{-1}(H) for a homomorphism into a finite
// table group, together with a user-supplied transversal (verified, never
// derived). transversal[0] must be the identity.
struct QuotientData {
  FiniteGroupTable target;
  std::vector<int> gen_images;
  std::vector<int> subgroup;  // H, sorted element indices
  std::vector<Element> transversal;

  void validate(const GroupContext& ctx);
  int hom(const GroupContext& ctx, const Element& g) const;
  bool in_lambda(const GroupContext& ctx, const Element& g) const;
  int coset_of(const GroupContext& ctx, const Element& g) const;
  int coset_count() const { return static_cast<int>(transversal.size()); }

  // Lambda as a subgroup of Gamma relative to the identity-hom case (finite
  // ctx only): the element indices of ctx.table landing in H.
  std::vector<int> lambda_elements(const GroupContext& ctx) const;

  // Quotient data for the degenerate case Lambda = Gamma.
  static QuotientData whole_group(const GroupContext& ctx);

 private:
  std::vector<int> coset_rep_;  // target element index per coset, aligned with transversal
  bool validated_ = false;
  friend struct QuotientDataAccess;
};

// rho(gamma, a Lambda) = r(gamma a Lambda)^{-1} gamma r(a Lambda), an element
// of Lambda (verified; throws when the membership test fails).
Element coset_cocycle(const GroupContext& ctx, const QuotientData& q,
                      const Element& gamma, int coset);

}  // namespace ergoforge
