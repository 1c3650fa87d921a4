#include "ergoforge/group.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ergoforge {

namespace {

std::vector<std::string> default_names(int n, const char* stem) {
  std::vector<std::string> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(std::string(stem) + std::to_string(i));
  return out;
}

// Letter names a, b, c, ... for small ranks, g0, g1, ... beyond.
std::vector<std::string> letter_names(int n) {
  if (n > 8) return default_names(n, "g");
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
  return out;
}

void append_reduced(std::vector<int>& word, int letter) {
  if (!word.empty() && word.back() == -letter) {
    word.pop_back();
  } else {
    word.push_back(letter);
  }
}

}  // namespace

void FiniteGroupTable::validate() const {
  const int n = size();
  if (n == 0) throw std::invalid_argument("group table: empty");
  if (static_cast<int>(names.size()) != n || static_cast<int>(inv.size()) != n)
    throw std::invalid_argument("group table: names/inv size mismatch");
  if (id < 0 || id >= n) throw std::invalid_argument("group table: bad identity index");
  for (const auto& row : mul) {
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("group table: ragged multiplication table");
    for (int v : row)
      if (v < 0 || v >= n) throw std::invalid_argument("group table: entry out of range");
  }
  for (int g = 0; g < n; ++g) {
    if (mul[id][g] != g || mul[g][id] != g)
      throw std::invalid_argument("group table: identity law fails");
    if (inv[g] < 0 || inv[g] >= n || mul[g][inv[g]] != id || mul[inv[g]][g] != id)
      throw std::invalid_argument("group table: inverse law fails");
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (mul[mul[a][b]][c] != mul[a][mul[b][c]])
          throw std::invalid_argument("group table: associativity fails");
}

FiniteGroupTable FiniteGroupTable::cyclic(int n) {
  if (n <= 0) throw std::invalid_argument("cyclic table: order must be positive");
  FiniteGroupTable t;
  t.names.reserve(n);
  for (int i = 0; i < n; ++i) t.names.push_back("c" + std::to_string(i));
  t.mul.assign(n, std::vector<int>(n));
  t.inv.assign(n, 0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) t.mul[a][b] = (a + b) % n;
    t.inv[a] = (n - a) % n;
  }
  t.id = 0;
  return t;
}

FiniteGroupTable FiniteGroupTable::symmetric(int k) {
  if (k <= 0 || k > 8) throw std::invalid_argument("symmetric table: need 0 < k <= 8");
  std::vector<int> base(k);
  std::iota(base.begin(), base.end(), 0);
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));

  std::map<std::vector<int>, int> index;
  for (size_t i = 0; i < perms.size(); ++i) index[perms[i]] = static_cast<int>(i);

  const int n = static_cast<int>(perms.size());
  FiniteGroupTable t;
  t.one_line = perms;
  t.names.reserve(n);
  for (const auto& p : perms) {
    std::string nm = "s";
    for (int v : p) nm += std::to_string(v);
    t.names.push_back(nm);
  }
  t.mul.assign(n, std::vector<int>(n));
  t.inv.assign(n, 0);
  std::vector<int> comp(k), ivp(k);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int i = 0; i < k; ++i) comp[i] = perms[a][perms[b][i]];
      t.mul[a][b] = index.at(comp);
    }
    for (int i = 0; i < k; ++i) ivp[perms[a][i]] = i;
    t.inv[a] = index.at(ivp);
  }
  t.id = 0;  // identity permutation is lexicographically first
  return t;
}

FiniteGroupTable FiniteGroupTable::from_table(std::vector<std::string> names,
                                              std::vector<std::vector<int>> mul) {
  FiniteGroupTable t;
  t.names = std::move(names);
  t.mul = std::move(mul);
  const int n = t.size();
  t.id = -1;
  for (int g = 0; g < n; ++g) {
    bool ident = true;
    for (int h = 0; h < n && ident; ++h)
      ident = static_cast<int>(t.mul[g].size()) == n && t.mul[g][h] == h && t.mul[h][g] == h;
    if (ident) {
      t.id = g;
      break;
    }
  }
  if (t.id < 0) throw std::invalid_argument("group table: no identity element");
  t.inv.assign(n, -1);
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h)
      if (t.mul[g][h] == t.id && t.mul[h][g] == t.id) {
        t.inv[g] = h;
        break;
      }
  }
  t.validate();
  return t;
}

GroupContext GroupContext::free_group_ctx(int k, std::vector<std::string> names) {
  if (k <= 0) throw std::invalid_argument("free group: rank must be positive");
  GroupContext c;
  c.kind = GroupKind::free_group;
  c.rank = k;
  c.gen_names = names.empty() ? letter_names(k) : std::move(names);
  if (static_cast<int>(c.gen_names.size()) != k)
    throw std::invalid_argument("free group: name count mismatch");
  return c;
}

GroupContext GroupContext::free_abelian_ctx(int d, std::vector<std::string> names) {
  if (d <= 0) throw std::invalid_argument("free abelian group: rank must be positive");
  GroupContext c;
  c.kind = GroupKind::free_abelian;
  c.rank = d;
  c.gen_names = names.empty() ? letter_names(d) : std::move(names);
  if (static_cast<int>(c.gen_names.size()) != d)
    throw std::invalid_argument("free abelian group: name count mismatch");
  return c;
}

GroupContext GroupContext::finite_ctx(FiniteGroupTable t, std::vector<int> gens,
                                      std::vector<std::string> gen_names) {
  t.validate();
  if (gens.empty()) throw std::invalid_argument("finite group: empty generating set");
  for (int g : gens)
    if (g < 0 || g >= t.size())
      throw std::invalid_argument("finite group: generator index out of range");
  GroupContext c;
  c.kind = GroupKind::finite;
  c.rank = static_cast<int>(gens.size());
  c.table = std::move(t);
  c.gen_elems = std::move(gens);
  if (gen_names.empty()) {
    for (int g : c.gen_elems) gen_names.push_back(c.table.names[g]);
  }
  if (gen_names.size() != c.gen_elems.size())
    throw std::invalid_argument("finite group: generator name count mismatch");
  c.gen_names = std::move(gen_names);
  c.build_elem_words();
  return c;
}

GroupContext GroupContext::free_quotient_ctx(FiniteGroupTable t, std::vector<int> images,
                                             std::vector<std::string> names) {
  if (names.empty()) names = letter_names(static_cast<int>(images.size()));
  GroupContext c = finite_ctx(std::move(t), std::move(images), std::move(names));
  c.kind = GroupKind::free_quotient;
  return c;
}

void GroupContext::build_elem_words() {
  const int n = table.size();
  elem_words_.assign(n, {});
  std::vector<char> seen(n, 0);
  std::deque<int> queue;
  seen[table.id] = 1;
  queue.push_back(table.id);
  while (!queue.empty()) {
    int g = queue.front();
    queue.pop_front();
    for (int i = 0; i < rank; ++i) {
      int h = table.mul[g][gen_elems[i]];
      if (!seen[h]) {
        seen[h] = 1;
        elem_words_[h] = elem_words_[g];
        elem_words_[h].push_back(i + 1);
        queue.push_back(h);
      }
    }
  }
  for (int g = 0; g < n; ++g)
    if (!seen[g])
      throw std::invalid_argument("finite group: generators do not generate (element " +
                                  table.names[g] + " unreachable)");
}

int GroupContext::generator_count() const { return rank; }

Element GroupContext::identity() const {
  switch (kind) {
    case GroupKind::free_group:
      return {};
    case GroupKind::free_abelian:
      return Element{std::vector<int>(rank, 0)};
    default:
      return Element{{table.id}};
  }
}

Element GroupContext::generator(int i) const {
  if (i < 0 || i >= rank) throw std::invalid_argument("generator index out of range");
  switch (kind) {
    case GroupKind::free_group:
      return Element{{i + 1}};
    case GroupKind::free_abelian: {
      std::vector<int> e(rank, 0);
      e[i] = 1;
      return Element{std::move(e)};
    }
    default:
      return Element{{gen_elems[i]}};
  }
}

void GroupContext::check_element(const Element& g) const {
  switch (kind) {
    case GroupKind::free_group:
      for (size_t i = 0; i < g.w.size(); ++i) {
        int l = g.w[i];
        if (l == 0 || l > rank || l < -rank)
          throw std::invalid_argument("free group element: letter out of range");
        if (i + 1 < g.w.size() && g.w[i + 1] == -l)
          throw std::invalid_argument("free group element: word not reduced");
      }
      return;
    case GroupKind::free_abelian:
      if (static_cast<int>(g.w.size()) != rank)
        throw std::invalid_argument("free abelian element: wrong exponent count");
      return;
    default:
      if (g.w.size() != 1 || g.w[0] < 0 || g.w[0] >= table.size())
        throw std::invalid_argument("table group element: bad index");
      return;
  }
}

Element GroupContext::multiply(const Element& g, const Element& h) const {
  switch (kind) {
    case GroupKind::free_group: {
      std::vector<int> out = g.w;
      for (int l : h.w) append_reduced(out, l);
      return Element{std::move(out)};
    }
    case GroupKind::free_abelian: {
      std::vector<int> out(rank);
      for (int i = 0; i < rank; ++i) out[i] = g.w[i] + h.w[i];
      return Element{std::move(out)};
    }
    default:
      return Element{{table.mul[g.w[0]][h.w[0]]}};
  }
}

Element GroupContext::inverse(const Element& g) const {
  switch (kind) {
    case GroupKind::free_group: {
      std::vector<int> out(g.w.rbegin(), g.w.rend());
      for (int& l : out) l = -l;
      return Element{std::move(out)};
    }
    case GroupKind::free_abelian: {
      std::vector<int> out = g.w;
      for (int& e : out) e = -e;
      return Element{std::move(out)};
    }
    default:
      return Element{{table.inv[g.w[0]]}};
  }
}

bool GroupContext::is_identity(const Element& g) const { return g == identity(); }

Element GroupContext::power(const Element& g, long long n) const {
  Element base = n < 0 ? inverse(g) : g;
  unsigned long long k = n < 0 ? static_cast<unsigned long long>(-n)
                               : static_cast<unsigned long long>(n);
  Element acc = identity();
  while (k) {
    if (k & 1) acc = multiply(acc, base);
    base = multiply(base, base);
    k >>= 1;
  }
  return acc;
}

Element GroupContext::from_letters(const std::vector<int>& letters) const {
  Element acc = identity();
  for (int l : letters) {
    if (l == 0 || l > rank || l < -rank)
      throw std::invalid_argument("letter out of range");
    Element gen = generator(std::abs(l) - 1);
    acc = multiply(acc, l > 0 ? gen : inverse(gen));
  }
  return acc;
}

std::vector<int> GroupContext::to_letters(const Element& g) const {
  check_element(g);
  switch (kind) {
    case GroupKind::free_group:
      return g.w;
    case GroupKind::free_abelian: {
      std::vector<int> out;
      for (int i = 0; i < rank; ++i) {
        for (int k = 0; k < std::abs(g.w[i]); ++k) out.push_back(g.w[i] > 0 ? i + 1 : -(i + 1));
      }
      return out;
    }
    default:
      return elem_words_[g.w[0]];
  }
}

std::string GroupContext::to_string(const Element& g) const {
  check_element(g);
  if (kind == GroupKind::free_abelian) {
    std::string out = "(";
    for (int i = 0; i < rank; ++i) {
      if (i) out += ",";
      out += std::to_string(g.w[i]);
    }
    return out + ")";
  }
  if (table_backed()) return table.names[g.w[0]];
  if (g.w.empty()) return "e";
  std::string out;
  for (size_t i = 0; i < g.w.size(); ++i) {
    if (i) out += " ";
    int l = g.w[i];
    out += gen_names[std::abs(l) - 1];
    if (l < 0) out += "^-1";
  }
  return out;
}

Element GroupContext::parse_element(const std::string& s) const {
  if (kind == GroupKind::free_abelian) {
    if (s.size() < 2 || s.front() != '(' || s.back() != ')')
      throw std::invalid_argument("bad abelian element literal: " + s);
    std::vector<int> e;
    std::string body = s.substr(1, s.size() - 2);
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) e.push_back(std::stoi(tok));
    Element g{std::move(e)};
    check_element(g);
    return g;
  }
  if (table_backed()) {
    for (int i = 0; i < table.size(); ++i)
      if (table.names[i] == s) return Element{{i}};
    throw std::invalid_argument("unknown table element name: " + s);
  }
  if (s == "e") return identity();
  std::stringstream ss(s);
  std::string tok;
  std::vector<int> letters;
  while (ss >> tok) {
    bool invflag = false;
    if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
      invflag = true;
      tok = tok.substr(0, tok.size() - 3);
    }
    int gi = -1;
    for (int i = 0; i < rank; ++i)
      if (gen_names[i] == tok) gi = i;
    if (gi < 0) throw std::invalid_argument("unknown generator name: " + tok);
    letters.push_back(invflag ? -(gi + 1) : gi + 1);
  }
  return from_letters(letters);
}

Window Window::of(std::vector<Element> elems, bool is_ball) {
  Window w;
  w.elems = std::move(elems);
  w.is_ball = is_ball;
  for (size_t i = 0; i < w.elems.size(); ++i) {
    auto [it, fresh] = w.idx_.emplace(w.elems[i].w, static_cast<int>(i));
    if (!fresh) throw std::invalid_argument("window: duplicate element at position " +
                                            std::to_string(i));
  }
  return w;
}

int Window::find(const Element& g) const {
  auto it = idx_.find(g.w);
  return it == idx_.end() ? -1 : it->second;
}

int Window::at(const Element& g) const {
  int i = find(g);
  if (i < 0) throw std::out_of_range("window: element not present");
  return i;
}

std::vector<Element> symmetric_generating_set(const GroupContext& ctx) {
  std::vector<Element> S;
  for (int i = 0; i < ctx.generator_count(); ++i) {
    Element g = ctx.generator(i);
    if (std::find(S.begin(), S.end(), g) == S.end() && !ctx.is_identity(g)) S.push_back(g);
    Element gi = ctx.inverse(g);
    if (std::find(S.begin(), S.end(), gi) == S.end() && !ctx.is_identity(gi)) S.push_back(gi);
  }
  if (S.empty()) throw std::invalid_argument("generating set: all generators trivial");
  return S;
}

Window cayley_ball(const GroupContext& ctx, const std::vector<Element>& S, int r) {
  if (r < 0) throw std::invalid_argument("cayley ball: negative radius");
  std::set<std::vector<int>> distinct;
  for (const auto& s : S) {
    ctx.check_element(s);
    if (ctx.is_identity(s)) throw std::invalid_argument("cayley ball: identity in generating set");
    if (!distinct.insert(s.w).second)
      throw std::invalid_argument("cayley ball: duplicate in generating set");
  }
  std::vector<Element> out{ctx.identity()};
  std::set<std::vector<int>> seen{ctx.identity().w};
  size_t layer_begin = 0;
  for (int depth = 0; depth < r; ++depth) {
    size_t layer_end = out.size();
    for (size_t i = layer_begin; i < layer_end; ++i) {
      for (const auto& s : S) {
        Element v = ctx.multiply(out[i], s);
        if (seen.insert(v.w).second) out.push_back(v);
      }
    }
    layer_begin = layer_end;
    if (layer_begin == out.size()) break;
  }
  return Window::of(std::move(out), true);
}

Window cayley_ball(const GroupContext& ctx, int r) {
  return cayley_ball(ctx, symmetric_generating_set(ctx), r);
}

void QuotientData::validate(const GroupContext& ctx) {
  target.validate();
  if (static_cast<int>(gen_images.size()) != ctx.generator_count())
    throw std::invalid_argument("quotient: one generator image required per generator");
  for (int g : gen_images)
    if (g < 0 || g >= target.size())
      throw std::invalid_argument("quotient: generator image out of range");

  // image subgroup of the homomorphism
  std::set<int> image{target.id};
  std::deque<int> queue{target.id};
  while (!queue.empty()) {
    int g = queue.front();
    queue.pop_front();
    for (int s : gen_images) {
      for (int h : {target.mul[g][s], target.mul[g][target.inv[s]]}) {
        if (image.insert(h).second) queue.push_back(h);
      }
    }
  }

  std::set<int> H(subgroup.begin(), subgroup.end());
  if (H.size() != subgroup.size()) throw std::invalid_argument("quotient: duplicate subgroup entries");
  if (!H.count(target.id)) throw std::invalid_argument("quotient: subgroup misses identity");
  for (int a : H) {
    if (a < 0 || a >= target.size()) throw std::invalid_argument("quotient: subgroup index out of range");
    if (!image.count(a))
      throw std::invalid_argument("quotient: subgroup not contained in homomorphism image");
    if (!H.count(target.inv[a])) throw std::invalid_argument("quotient: subgroup not inverse-closed");
    for (int b : H)
      if (!H.count(target.mul[a][b])) throw std::invalid_argument("quotient: subgroup not product-closed");
  }
  subgroup.assign(H.begin(), H.end());

  if (image.size() % H.size() != 0)
    throw std::invalid_argument("quotient: subgroup order does not divide image order");
  const size_t index = image.size() / H.size();
  if (transversal.size() != index)
    throw std::invalid_argument("quotient: transversal size " + std::to_string(transversal.size()) +
                                " does not match index " + std::to_string(index));
  if (transversal.empty() || !ctx.is_identity(transversal[0]))
    throw std::invalid_argument("quotient: transversal must start with the identity");

  coset_rep_.clear();
  std::set<int> covered;  // minimal element of each covered coset gH
  for (const auto& t : transversal) {
    int img = hom(ctx, t);
    int rep = target.size();
    for (int h : subgroup) rep = std::min(rep, target.mul[img][h]);
    if (!covered.insert(rep).second)
      throw std::invalid_argument("quotient: transversal entries share a coset");
    coset_rep_.push_back(img);
  }
  validated_ = true;
}

int QuotientData::hom(const GroupContext& ctx, const Element& g) const {
  int acc = target.id;
  for (int l : ctx.to_letters(g)) {
    int img = gen_images[std::abs(l) - 1];
    acc = target.mul[acc][l > 0 ? img : target.inv[img]];
  }
  return acc;
}

bool QuotientData::in_lambda(const GroupContext& ctx, const Element& g) const {
  int img = hom(ctx, g);
  return std::binary_search(subgroup.begin(), subgroup.end(), img);
}

int QuotientData::coset_of(const GroupContext& ctx, const Element& g) const {
  if (!validated_) throw std::logic_error("quotient: validate() before use");
  int img = hom(ctx, g);
  // g and transversal[i] share a coset iff rep(i)^{-1} img lies in H
  for (size_t i = 0; i < coset_rep_.size(); ++i) {
    int d = target.mul[target.inv[coset_rep_[i]]][img];
    if (std::binary_search(subgroup.begin(), subgroup.end(), d)) return static_cast<int>(i);
  }
  throw std::invalid_argument("quotient: element lies outside the covered cosets");
}

std::vector<int> QuotientData::lambda_elements(const GroupContext& ctx) const {
  if (!ctx.table_backed())
    throw std::invalid_argument("quotient: lambda enumeration needs a table-backed group");
  std::vector<int> out;
  for (int g = 0; g < ctx.table.size(); ++g)
    if (in_lambda(ctx, Element{{g}})) out.push_back(g);
  return out;
}

QuotientData QuotientData::whole_group(const GroupContext& ctx) {
  QuotientData q;
  q.target = FiniteGroupTable::cyclic(1);
  q.gen_images.assign(ctx.generator_count(), 0);
  q.subgroup = {0};
  q.transversal = {ctx.identity()};
  q.validate(ctx);
  return q;
}

Element coset_cocycle(const GroupContext& ctx, const QuotientData& q,
                      const Element& gamma, int coset) {
  if (coset < 0 || coset >= q.coset_count())
    throw std::invalid_argument("coset cocycle: coset index out of range");
  const Element& rep = q.transversal[coset];
  Element moved = ctx.multiply(gamma, rep);
  const Element& target_rep = q.transversal[q.coset_of(ctx, moved)];
  Element rho = ctx.multiply(ctx.inverse(target_rep), moved);
  if (!q.in_lambda(ctx, rho))
    throw std::logic_error("coset cocycle: value escaped the subgroup (bad transversal?)");
  return rho;
}

}  // namespace ergoforge
