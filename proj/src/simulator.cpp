#include "fsc/simulator.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "fsc/error.hpp"

namespace fsc::sim {

std::size_t RepairTranscript::downloads() const {
  std::size_t total = 0;
  for (const auto& h : helpers) total += h.symbols.size();
  return total;
}

std::string RunReport::text() const {
  std::ostringstream out;
  out << "steps " << steps << "\n"
      << "repairs " << repairs << "\n"
      << "states_visited " << states_visited << "\n"
      << "downloads_total " << downloads_total << "\n"
      << "bandwidth " << (bandwidth_ok ? "ok" : "FAILED") << "\n"
      << "closure " << (closure_ok ? "ok" : "FAILED") << "\n"
      << "collect_checks " << collect_checks << "\n"
      << "integrity_failures " << integrity_failures << "\n";
  if (!failure.empty()) out << "failure " << failure << "\n";
  out << "verdict " << (ok() ? "ok" : "FAILED") << "\n";
  return out.str();
}

namespace {

VerificationReport verified(const StateSet& code) {
  VerificationReport report = check_repair_property(code);
  if (!report.passed) throw VerificationFailure("refusing to simulate an unverified code: " + report.failure_reason);
  return report;
}

Elem dot_symbols(const Field& f, std::span<const Elem> coeffs, std::span<const Elem> symbols) {
  return linalg::dot(f, coeffs, symbols);
}

}  // namespace

Dss::Dss(const StateSet& code, Vector x, std::uint64_t seed, SimOptions options)
    : Dss(code, verified(code), std::move(x), seed, options) {}

Dss::Dss(const StateSet& code, const VerificationReport& proof, Vector x, std::uint64_t seed, SimOptions options)
    : code_(&code), options_(options), rng_(seed) {
  if (!proof.passed) throw VerificationFailure("refusing to simulate an unverified code");
  if (code.size() == 0) throw std::invalid_argument("empty code");
  const RepairingCollection& first = code.collections().front();
  const auto& newcomers = valid_newcomers(first);
  if (newcomers.empty()) throw InternalError("verified code has a collection without valid newcomer");
  std::vector<Subspace> spaces = first.spaces();
  spaces.push_back(newcomers.front());
  init_nodes(spaces, x);
}

Dss::Dss(const StateSet& code, const VerificationReport& proof, std::span<const Subspace> nodes, Vector x,
         std::uint64_t seed, SimOptions options)
    : code_(&code), options_(options), rng_(seed) {
  if (!proof.passed) throw VerificationFailure("refusing to simulate an unverified code");
  if (nodes.size() != code.params().n) throw std::invalid_argument("expected n node spaces");
  init_nodes(nodes, x);
  if (!closure_holds()) throw std::invalid_argument("initial nodes are not consistent with the code");
}

void Dss::init_nodes(std::span<const Subspace> spaces, const Vector& x) {
  const Field& f = code_->field();
  const auto& p = code_->params();
  if (&x.field() != &f || x.size() != p.m) throw std::invalid_argument("data vector must lie in F_q^m");
  nodes_.clear();
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    const Subspace& s = spaces[i];
    if (&s.field() != &f || s.ambient() != p.m || s.dim() != p.alpha) {
      throw std::invalid_argument("node space does not match the code parameters");
    }
    Node n{i, s, s.basis(), {}, true};
    for (std::size_t l = 0; l < n.basis.rows(); ++l) n.stored.push_back(linalg::dot(f, x.coords(), n.basis.row(l)));
    nodes_.push_back(std::move(n));
  }
  if (options_.test_mode) x_ = x;
}

void Dss::fail(std::size_t id) {
  if (id >= nodes_.size()) throw std::out_of_range("no such node");
  if (failed_) throw std::logic_error("a node has already failed");
  nodes_[id].alive = false;
  nodes_[id].stored.clear();
  failed_ = id;
}

RepairingCollection Dss::survivors(std::size_t failed) const {
  std::vector<Subspace> spaces;
  for (const auto& n : nodes_) {
    if (n.id != failed) spaces.push_back(n.space);
  }
  return RepairingCollection(std::move(spaces));
}

bool Dss::closure_holds() const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!code_->contains(survivors(i))) return false;
  }
  return true;
}

const std::vector<Subspace>& Dss::valid_newcomers(const RepairingCollection& c) {
  auto it = newcomer_cache_.find(c.key());
  if (it != newcomer_cache_.end()) return it->second;
  std::vector<Subspace> valid;
  for (auto& u : obtainable_spaces(c, code_->params())) {
    bool ok = true;
    for (std::size_t i = 0; i < c.size() && ok; ++i) ok = code_->contains(collection_key_with(c.spaces(), i, u));
    if (ok) valid.push_back(std::move(u));
  }
  return newcomer_cache_.emplace(c.key(), std::move(valid)).first->second;
}

RepairTranscript Dss::repair(std::size_t id) {
  if (!failed_ || *failed_ != id) throw std::logic_error("repair: node has not failed");
  const RepairingCollection surv = survivors(id);
  if (!code_->contains(surv)) throw VerificationFailure("survivors are not an admissible collection");
  const auto& choices = valid_newcomers(surv);
  if (choices.empty()) throw InternalError("no valid newcomer for an admissible collection");
  const Subspace newcomer =
      options_.choice == NewcomerChoice::Random ? choices[uniform_index(rng_, choices.size())] : choices.front();
  const auto witness = find_witness(surv, newcomer, code_->params());
  if (!witness) throw InternalError("valid newcomer without repair witness");
  std::vector<HelperChoice> helpers;
  for (std::size_t h = 0; h < witness->helpers.size(); ++h) {
    const std::size_t j = witness->helpers[h];
    helpers.push_back({j < id ? j : j + 1, witness->repair_spaces[h]});
  }
  return repair_with(id, newcomer, helpers);
}

RepairTranscript Dss::repair_with(std::size_t id, const Subspace& newcomer, std::span<const HelperChoice> helpers) {
  if (!failed_ || *failed_ != id) throw std::logic_error("repair: node has not failed");
  const Field& f = code_->field();
  const auto& p = code_->params();
  if (&newcomer.field() != &f || newcomer.ambient() != p.m || newcomer.dim() != p.alpha) {
    throw std::invalid_argument("newcomer does not match the code parameters");
  }
  if (helpers.size() != p.r) throw std::invalid_argument("repair needs exactly r helpers");
  const RepairingCollection surv = survivors(id);
  if (!code_->contains(surv)) throw VerificationFailure("survivors are not an admissible collection");

  RepairTranscript t{events_ + 1, id, {}, newcomer, newcomer.basis(), {}, {}, {}};
  for (const auto& s : surv.spaces()) t.collection += (t.collection.empty() ? "" : " ") + format_subspace(s);

  std::set<std::size_t> used;
  Matrix rows(0, p.m);
  std::vector<Elem> downloaded;
  for (const auto& h : helpers) {
    if (h.node >= nodes_.size() || h.node == id || !nodes_[h.node].alive) {
      throw std::invalid_argument("helper is not a live node");
    }
    if (!used.insert(h.node).second) throw std::invalid_argument("helpers must be distinct");
    const Node& n = nodes_[h.node];
    if (h.repair_space.dim() != p.beta || !h.repair_space.is_subspace_of(n.space)) {
      throw std::invalid_argument("repair space must be a beta-dim subspace of the helper space");
    }
    HelperDownload d{h.node, h.repair_space, Matrix(p.alpha, p.beta), {}};
    for (std::size_t c = 0; c < p.beta; ++c) {
      const auto w = h.repair_space.basis().row(c);
      const auto coeffs = linalg::solve_left(f, n.basis, w);
      if (!coeffs) throw InternalError("repair vector outside the helper space");
      for (std::size_t l = 0; l < p.alpha; ++l) d.combination(l, c) = (*coeffs)[l];
      d.symbols.push_back(dot_symbols(f, *coeffs, n.stored));
      rows.append_row(w);
      downloaded.push_back(d.symbols.back());
    }
    t.helpers.push_back(std::move(d));
  }

  for (std::size_t l = 0; l < newcomer.dim(); ++l) {
    auto coeffs = linalg::solve_left(f, rows, newcomer.basis().row(l));
    if (!coeffs) throw std::invalid_argument("newcomer is not inside the span of the repair spaces");
    t.newcomer_symbols.push_back(dot_symbols(f, *coeffs, downloaded));
    t.reconstruction.push_back(std::move(*coeffs));
  }

  Node& n = nodes_[id];
  n.space = newcomer;
  n.basis = newcomer.basis();
  n.stored = t.newcomer_symbols;
  n.alive = true;
  failed_.reset();
  ++events_;
  transcript_ += format_transcript(t, f.q());
  check_integrity(n);
  return t;
}

void Dss::check_integrity(const Node& n) const {
  if (!x_) return;
  const Field& f = code_->field();
  for (std::size_t l = 0; l < n.basis.rows(); ++l) {
    if (n.stored[l] != linalg::dot(f, x_->coords(), n.basis.row(l))) {
      throw VerificationFailure("node " + std::to_string(n.id) + " stores a symbol that does not match x");
    }
  }
}

Vector Dss::collect(std::span<const std::size_t> ids) const {
  const Field& f = code_->field();
  const std::size_t m = code_->params().m;
  Matrix rows(0, m);
  std::vector<Elem> symbols;
  for (auto id : ids) {
    const Node& n = nodes_.at(id);
    if (!n.alive) throw std::invalid_argument("collect: node " + std::to_string(id) + " is not alive");
    for (std::size_t l = 0; l < n.basis.rows(); ++l) {
      rows.append_row(n.basis.row(l));
      symbols.push_back(n.stored[l]);
    }
  }
  if (linalg::rank(f, rows) != m) throw InsufficientNodes("collect: the chosen nodes do not span F^m");
  // x * A = symbols where column l of A is the l-th basis vector
  Matrix a(m, rows.rows());
  for (std::size_t l = 0; l < rows.rows(); ++l)
    for (std::size_t c = 0; c < m; ++c) a(c, l) = rows(l, c);
  auto x = linalg::solve_left(f, a, symbols);
  if (!x) throw VerificationFailure("collect: stored symbols are inconsistent");
  return Vector(f, std::move(*x));
}

RunReport Dss::run_random(std::size_t steps) {
  RunReport report;
  const auto& p = code_->params();
  const std::size_t n = nodes_.size();
  std::set<std::string> visited;
  std::optional<Vector> reference = x_;

  auto check_collect = [&](std::span<const std::size_t> ids) {
    Vector got = collect(ids);
    ++report.collect_checks;
    if (!reference) reference = got;
    if (!(got == *reference)) throw VerificationFailure("collect recovered a different data vector");
  };
  auto subsets = [&](auto&& visit) {
    std::vector<std::size_t> idx(p.k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      visit(idx);
      std::size_t t = p.k;
      while (t > 0 && idx[t - 1] == n - p.k + t - 1) --t;
      if (t == 0) return;
      ++idx[t - 1];
      for (std::size_t u = t; u < p.k; ++u) idx[u] = idx[u - 1] + 1;
    }
  };
  auto spans = [&](std::span<const std::size_t> ids) {
    std::vector<Subspace> s;
    for (auto id : ids) s.push_back(nodes_[id].space);
    return is_recovery_set(s, p.m);
  };

  try {
    for (std::size_t step = 0; step < steps; ++step) {
      const std::size_t id = uniform_index(rng_, n);
      fail(id);
      visited.insert(survivors(id).key());
      const RepairTranscript t = repair(id);
      ++report.repairs;
      report.downloads_total += t.downloads();
      if (t.downloads() != p.r * p.beta) report.bandwidth_ok = false;
      if (!closure_holds()) report.closure_ok = false;

      if (options_.exhaustive_collect) {
        bool any = false;
        subsets([&](const std::vector<std::size_t>& ids) {
          if (!spans(ids)) return;
          any = true;
          check_collect(ids);
        });
        if (!any) throw VerificationFailure("no spanning k-subset of live nodes");
      } else {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        bool done = false;
        for (int attempt = 0; attempt < 1000 && !done; ++attempt) {
          for (std::size_t j = n; j > 1; --j) std::swap(perm[j - 1], perm[uniform_index(rng_, j)]);
          std::vector<std::size_t> ids(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(p.k));
          std::sort(ids.begin(), ids.end());
          if (!spans(ids)) continue;
          check_collect(ids);
          done = true;
        }
        if (!done) throw VerificationFailure("no spanning k-subset of live nodes found");
      }
      ++report.steps;
    }
  } catch (const VerificationFailure& e) {
    ++report.integrity_failures;
    report.failure = e.what();
  }
  report.states_visited = visited.size();
  return report;
}

Vector parse_data(const Field& f, std::size_t m, const std::string& digits) {
  if (f.q() > 36) throw std::invalid_argument("digit strings need q <= 36");
  if (digits.size() != m) {
    throw std::invalid_argument("data must have " + std::to_string(m) + " digits, got " +
                                std::to_string(digits.size()));
  }
  std::vector<Elem> coords;
  for (char c : digits) {
    int v = -1;
    if (c >= '0' && c <= '9') v = c - '0';
    if (c >= 'a' && c <= 'z') v = c - 'a' + 10;
    if (v < 0 || v >= f.q()) throw std::invalid_argument(std::string("invalid digit '") + c + "'");
    coords.push_back(static_cast<Elem>(v));
  }
  return Vector(f, std::move(coords));
}

std::string format_vector(std::span<const Elem> v, int q) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (q <= 36) {
      out += static_cast<char>(v[i] < 10 ? '0' + v[i] : 'a' + (v[i] - 10));
    } else {
      if (i) out += '.';
      out += std::to_string(v[i]);
    }
  }
  return out;
}

std::string format_subspace(const Subspace& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (i) out += ',';
    out += format_vector(s.basis().row(i), s.field().q());
  }
  return out + "]";
}

std::string format_transcript(const RepairTranscript& t, int q) {
  std::ostringstream out;
  out << "event " << t.event << "\n";
  out << "failed " << t.failed << "\n";
  out << "survivors " << t.collection << "\n";
  for (const auto& h : t.helpers) {
    out << "helper " << h.node << " repair " << format_subspace(h.repair_space) << " combination ";
    for (std::size_t c = 0; c < h.combination.cols(); ++c) {
      if (c) out << ',';
      std::vector<Elem> column;
      for (std::size_t l = 0; l < h.combination.rows(); ++l) column.push_back(h.combination(l, c));
      out << format_vector(column, q);
    }
    out << " downloads " << format_vector(h.symbols, q) << "\n";
  }
  out << "newcomer " << format_subspace(t.newcomer) << "\n";
  out << "reconstruction";
  for (const auto& row : t.reconstruction) out << " " << format_vector(row, q);
  out << "\n";
  out << "stored " << format_vector(t.newcomer_symbols, q) << "\n";
  out << "downloads " << t.downloads() << "\n\n";
  return out.str();
}

}  // namespace fsc::sim
