#include "nilergodic/malcev.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace nilergodic {

namespace {

using detail::GroupImpl;

std::shared_ptr<const GroupImpl> trivial_impl() {
  static const auto t = std::make_shared<const GroupImpl>();
  return t;
}

// Inner level blocks: level i (1-based) covers coordinates [D - d_i, D - d_{i+1}).
std::pair<int, int> block(const GroupImpl& I, int i) {
  auto d = [&](int j) { return j >= 1 && j <= static_cast<int>(I.dims.size()) ? I.dims[j - 1] : 0; };
  return {I.dim - d(i), I.dim - d(i + 1)};
}

std::string trim(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(static_cast<char>(std::tolower(c)));
  return out;
}

}  // namespace

FilteredGroup::FilteredGroup() : impl_(trivial_impl()) {}

FilteredGroup FilteredGroup::trivial() { return FilteredGroup(); }

FilteredGroup FilteredGroup::abelian(int d, int l) {
  if (d < 0 || l < 0) throw DomainError("abelian: negative dimension or length");
  if (d == 0 || l == 0) {
    if (d != 0 || l != 0) throw DomainError("abelian: use abelian(0,0) for the trivial group");
    return trivial();
  }
  auto g = std::make_shared<GroupImpl>();
  g->kind = GroupKind::Abelian;
  g->abelian_d = d;
  g->abelian_l = l;
  g->dims.assign(l, d);
  g->dim = d;
  if (d > kMaxDim) throw UnsupportedError("abelian: dimension exceeds kMaxDim");
  return FilteredGroup(g);
}

FilteredGroup FilteredGroup::heisenberg3() {
  static const auto h = [] {
    auto g = std::make_shared<GroupImpl>();
    g->kind = GroupKind::Heisenberg3;
    g->dims = {3, 1};
    g->dim = 3;
    return std::shared_ptr<const GroupImpl>(g);
  }();
  return FilteredGroup(h);
}

FilteredGroup FilteredGroup::direct_square(const FilteredGroup& inner) {
  const GroupImpl& I = inner.impl();
  if (I.dim == 0) return trivial();
  if (2 * I.dim > kMaxDim) throw UnsupportedError("direct_square: dimension exceeds kMaxDim");
  auto g = std::make_shared<GroupImpl>();
  g->kind = GroupKind::DirectSquare;
  g->inner = inner.impl_;
  g->dim = 2 * I.dim;
  for (int d : I.dims) g->dims.push_back(2 * d);
  g->pos0.assign(I.dim, -1);
  g->pos1.assign(I.dim, -1);
  int slot = 0;
  for (int i = 1; i <= static_cast<int>(I.dims.size()); ++i) {
    auto [lo, hi] = block(I, i);
    for (int c = lo; c < hi; ++c) g->pos0[c] = slot++;
    for (int c = lo; c < hi; ++c) g->pos1[c] = slot++;
  }
  return FilteredGroup(g);
}

FilteredGroup FilteredGroup::cube(const FilteredGroup& inner) {
  const GroupImpl& I = inner.impl();
  if (I.dim == 0) return trivial();
  const int l = static_cast<int>(I.dims.size());
  auto g = std::make_shared<GroupImpl>();
  g->kind = GroupKind::Cube;
  g->inner = inner.impl_;
  for (int i = 1; i <= l; ++i) g->dims.push_back(inner.dim_at(i) + inner.dim_at(i + 1));
  g->dim = g->dims.front();
  if (g->dim > kMaxDim) throw UnsupportedError("cube: dimension exceeds kMaxDim");
  g->pos0.assign(I.dim, -1);
  g->pos1.assign(I.dim, -1);
  int slot = 0;
  for (int i = 1; i <= l; ++i) {
    auto [lo, hi] = block(I, i);
    for (int c = lo; c < hi; ++c) g->pos0[c] = slot++;
    auto [hlo, hhi] = block(I, i + 1);
    for (int c = hlo; c < hhi; ++c) g->pos1[c] = slot++;
  }
  return FilteredGroup(g);
}

FilteredGroup FilteredGroup::parse(std::string_view descriptor) {
  std::string s = trim(descriptor);
  auto wrapped = [&](std::string_view head) -> std::optional<std::string> {
    if (s.size() > head.size() + 2 && s.compare(0, head.size(), head) == 0 && s[head.size()] == '(' &&
        s.back() == ')')
      return s.substr(head.size() + 1, s.size() - head.size() - 2);
    return std::nullopt;
  };
  if (s == "trivial") return trivial();
  if (s == "heisenberg3" || s == "heisenberg") return heisenberg3();
  if (s == "circle") return abelian(1, 1);
  if (auto body = wrapped("abelian")) {
    auto comma = body->find(',');
    if (comma == std::string::npos) throw ConfigError("group descriptor: abelian(d,l) expects two integers");
    try {
      return abelian(std::stoi(body->substr(0, comma)), std::stoi(body->substr(comma + 1)));
    } catch (const std::logic_error&) {
      throw ConfigError("group descriptor: bad integers in '" + s + "'");
    }
  }
  if (auto body = wrapped("square")) return direct_square(parse(*body));
  if (auto body = wrapped("cube")) return cube(parse(*body));
  throw ConfigError("group descriptor: cannot parse '" + std::string(descriptor) + "'");
}

int FilteredGroup::dim_at(int i) const {
  const auto& d = impl_->dims;
  if (d.empty()) return 0;
  if (i <= 0) return d.front();
  if (i > static_cast<int>(d.size())) return 0;
  return d[i - 1];
}

FilteredGroup FilteredGroup::inner() const {
  if (!impl_->inner) throw StructuralError("inner: group has no inner factor");
  return FilteredGroup(impl_->inner);
}

std::string FilteredGroup::descriptor() const {
  switch (impl_->kind) {
    case GroupKind::Abelian:
      if (impl_->dim == 0) return "trivial";
      return "abelian(" + std::to_string(impl_->abelian_d) + "," + std::to_string(impl_->abelian_l) + ")";
    case GroupKind::Heisenberg3:
      return "heisenberg3";
    case GroupKind::DirectSquare:
      return "square(" + inner().descriptor() + ")";
    case GroupKind::Cube:
      return "cube(" + inner().descriptor() + ")";
  }
  return "?";
}

bool operator==(const FilteredGroup& a, const FilteredGroup& b) {
  if (a.impl_ == b.impl_) return true;
  const GroupImpl &x = *a.impl_, &y = *b.impl_;
  if (x.kind != y.kind || x.dims != y.dims || x.dim != y.dim) return false;
  if (x.kind == GroupKind::Abelian) return x.abelian_d == y.abelian_d && x.abelian_l == y.abelian_l;
  if (x.kind == GroupKind::Heisenberg3) return true;
  return FilteredGroup(x.inner) == FilteredGroup(y.inner);
}

GroupElement::GroupElement(FilteredGroup group, std::span<const double> coords)
    : group_(std::move(group)), coords_(coords.begin(), coords.end()) {
  if (static_cast<int>(coords_.size()) != group_.dim())
    throw StructuralError("GroupElement: expected " + std::to_string(group_.dim()) + " coordinates, got " +
                          std::to_string(coords_.size()));
}

GroupElement::GroupElement(FilteredGroup group, std::initializer_list<double> coords)
    : GroupElement(std::move(group), std::span<const double>(coords.begin(), coords.size())) {}

GroupElement identity(const FilteredGroup& group) {
  Coords<double> zero(group.dim(), 0.0);
  return {group, zero};
}

namespace {
void require_same(const GroupElement& a, const GroupElement& b, const char* op) {
  if (!(a.group() == b.group()))
    throw StructuralError(std::string(op) + ": operands over different groups (" + a.group().descriptor() + " vs " +
                          b.group().descriptor() + ")");
}
}  // namespace

GroupElement multiply(const GroupElement& a, const GroupElement& b) {
  require_same(a, b, "multiply");
  Coords<double> out(a.dim());
  a.group().multiply<double>(a.coords().data(), b.coords().data(), out.data());
  return {a.group(), out};
}

GroupElement inverse(const GroupElement& a) {
  Coords<double> out(a.dim());
  a.group().inverse<double>(a.coords().data(), out.data());
  return {a.group(), out};
}

GroupElement power(const GroupElement& a, int128 n) {
  Coords<double> out(a.dim());
  a.group().power<double>(a.coords().data(), n, out.data());
  return {a.group(), out};
}

GroupElement commutator(const GroupElement& a, const GroupElement& b) {
  return inverse(a) * inverse(b) * a * b;
}

bool in_subgroup(const GroupElement& g, int i, double tol) {
  const int lead = g.group().dim() - g.group().dim_at(i);
  for (int c = 0; c < lead; ++c)
    if (std::fabs(g[c]) > tol) return false;
  return true;
}

bool is_lattice_point(const GroupElement& g, double tol) {
  for (double t : g.coords())
    if (std::fabs(t - std::nearbyint(t)) > tol) return false;
  return true;
}

double max_abs_difference(const GroupElement& a, const GroupElement& b) {
  require_same(a, b, "max_abs_difference");
  double m = 0.0;
  for (int c = 0; c < a.dim(); ++c) m = std::max(m, std::fabs(a[c] - b[c]));
  return m;
}

FundamentalDomainSplit reduce_to_fundamental_domain(const GroupElement& g) {
  Coords<double> k(g.dim()), gamma(g.dim());
  g.group().reduce<double>(g.coords().data(), k.data(), gamma.data());
  return {GroupElement(g.group(), k), GroupElement(g.group(), gamma)};
}

GroupElement one_parameter(const FilteredGroup& group, int b, double s) {
  if (b < 0 || b >= group.dim()) throw DomainError("one_parameter: basis index out of range");
  Coords<double> c(group.dim(), 0.0);
  c[b] = s;
  return {group, c};
}

GroupElement random_in_subgroup(const FilteredGroup& group, int i, std::mt19937_64& rng, double scale) {
  Coords<double> c(group.dim(), 0.0);
  for (int s = group.dim() - group.dim_at(i); s < group.dim(); ++s) c[s] = scale * (2.0 * unit_double(rng()) - 1.0);
  return {group, c};
}

GroupElement random_lattice_point(const FilteredGroup& group, std::mt19937_64& rng, int bound) {
  Coords<double> c(group.dim(), 0.0);
  const auto span = static_cast<std::uint64_t>(2 * bound + 1);
  for (auto& t : c) t = static_cast<double>(static_cast<std::int64_t>(rng() % span) - bound);
  return {group, c};
}

FilteredGroup cube_filtration(const FilteredGroup& group) { return FilteredGroup::cube(group); }

CubeElement to_pair(const GroupElement& u) {
  const FilteredGroup& G = u.group();
  if (G.kind() != GroupKind::Cube) throw StructuralError("to_pair: element is not in a cube group");
  FilteredGroup I = G.inner();
  Coords<double> g0(I.dim()), g1(I.dim());
  detail::cube_split<double>(G.impl(), u.coords().data(), g0.data(), g1.data());
  return {GroupElement(I, g0), GroupElement(I, g1)};
}

GroupElement from_pair(const FilteredGroup& cube_group, const CubeElement& p) {
  if (cube_group.kind() != GroupKind::Cube) throw StructuralError("from_pair: target is not a cube group");
  FilteredGroup I = cube_group.inner();
  if (!(p.g0.group() == I) || !(p.g1.group() == I)) throw StructuralError("from_pair: pair over the wrong group");
  Coords<double> u(cube_group.dim());
  detail::cube_merge<double>(cube_group.impl(), p.g0.coords().data(), p.g1.coords().data(), u.data());
  return {cube_group, u};
}

bool in_cube_subgroup(const CubeElement& p, int i, double tol) {
  return in_subgroup(p.g0, i, tol) && in_subgroup(p.g1, i, tol) &&
         in_subgroup(inverse(p.g0) * p.g1, i + 1, tol);
}

}  // namespace nilergodic
