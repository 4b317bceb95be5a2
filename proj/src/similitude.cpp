#include "augtree/similitude.hpp"

#include <algorithm>
#include <cmath>

#include "augtree/errors.hpp"
#include "json.hpp"

namespace augtree {

Xform Xform::identity(int dim) {
  if (dim <= 0) throw UsageError("dimension must be positive");
  Xform x;
  x.dim_ = dim;
  if (dim >= 2) {
    x.ortho_.assign(static_cast<std::size_t>(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) x.ortho_[static_cast<std::size_t>(i) * dim + i] = 1.0;
    x.tn_.assign(dim, 0.0);
  }
  return x;
}

Xform Xform::line(const Rational& scale, bool reflect, const Rational& translate) {
  if (scale <= 0) throw UsageError("scale of a similarity must be positive");
  Xform x;
  x.dim_ = 1;
  x.scale_ = scale;
  x.reflect_ = reflect;
  x.t1_ = translate;
  return x;
}

Xform Xform::general(int dim, const Rational& scale, std::vector<double> ortho,
                     std::vector<double> translate) {
  if (dim < 2) throw UsageError("general form requires dimension >= 2");
  if (scale <= 0) throw UsageError("scale of a similarity must be positive");
  if (ortho.size() != static_cast<std::size_t>(dim) * dim || translate.size() != static_cast<std::size_t>(dim))
    throw UsageError("orthogonal part or translation has wrong size");
  Xform x;
  x.dim_ = dim;
  x.scale_ = scale;
  x.ortho_ = std::move(ortho);
  x.tn_ = std::move(translate);
  return x;
}

Xform Xform::compose(const Xform& g) const {
  Xform out;
  out.dim_ = dim_;
  out.scale_ = scale_ * g.scale_;
  if (dim_ == 1) {
    out.reflect_ = reflect_ != g.reflect_;
    out.t1_ = coeff1() * g.t1_ + t1_;
    return out;
  }
  const int d = dim_;
  const double s = static_cast<double>(scale_);
  out.ortho_.assign(static_cast<std::size_t>(d) * d, 0.0);
  out.tn_.assign(d, 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += ortho_[i * d + k] * g.ortho_[k * d + j];
      out.ortho_[i * d + j] = acc;
    }
    double t = tn_[i];
    for (int k = 0; k < d; ++k) t += s * ortho_[i * d + k] * g.tn_[k];
    out.tn_[i] = t;
  }
  return out;
}

Xform Xform::inverse() const {
  Xform out;
  out.dim_ = dim_;
  out.scale_ = Rational(1) / scale_;
  if (dim_ == 1) {
    out.reflect_ = reflect_;
    out.t1_ = -t1_ / coeff1();
    return out;
  }
  const int d = dim_;
  const double si = 1.0 / static_cast<double>(scale_);
  out.ortho_.assign(static_cast<std::size_t>(d) * d, 0.0);
  out.tn_.assign(d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out.ortho_[i * d + j] = ortho_[j * d + i];
  for (int i = 0; i < d; ++i) {
    double acc = 0.0;
    for (int k = 0; k < d; ++k) acc += out.ortho_[i * d + k] * tn_[k];
    out.tn_[i] = -si * acc;
  }
  return out;
}

bool Xform::equals(const Xform& o, double tol) const {
  if (dim_ != o.dim_) return false;
  if (dim_ == 1) return scale_ == o.scale_ && reflect_ == o.reflect_ && t1_ == o.t1_;
  if (std::abs(static_cast<double>(scale_) - static_cast<double>(o.scale_)) > tol) return false;
  for (std::size_t i = 0; i < ortho_.size(); ++i)
    if (std::abs(ortho_[i] - o.ortho_[i]) > tol) return false;
  for (std::size_t i = 0; i < tn_.size(); ++i)
    if (std::abs(tn_[i] - o.tn_[i]) > tol) return false;
  return true;
}

bool Xform::before(const Xform& o) const {
  if (dim_ != o.dim_) return dim_ < o.dim_;
  if (dim_ == 1) {
    if (scale_ != o.scale_) return scale_ < o.scale_;
    if (reflect_ != o.reflect_) return !reflect_;
    return t1_ < o.t1_;
  }
  if (scale_ != o.scale_) return scale_ < o.scale_;
  if (ortho_ != o.ortho_) return ortho_ < o.ortho_;
  return tn_ < o.tn_;
}

std::vector<double> Xform::apply(const std::vector<double>& x) const {
  if (dim_ == 1) {
    return {static_cast<double>(coeff1()) * x[0] + static_cast<double>(t1_)};
  }
  const int d = dim_;
  const double s = static_cast<double>(scale_);
  std::vector<double> out(d, 0.0);
  for (int i = 0; i < d; ++i) {
    double acc = 0.0;
    for (int k = 0; k < d; ++k) acc += ortho_[i * d + k] * x[k];
    out[i] = s * acc + tn_[i];
  }
  return out;
}

Xform compose(const Xform& f, const Xform& g) {
  if (f.dim() != g.dim()) throw UsageError("cannot compose maps of different dimension");
  return f.compose(g);
}

bool shortlex_less_syms(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

bool shortlex_less(const Word& a, const Word& b) { return shortlex_less_syms(a.syms, b.syms); }

void IfsSpec::validate() const {
  if (dimension < 1) throw UsageError("dimension must be >= 1");
  if (nmaps() < 2) throw UsageError("an IFS needs at least two maps");
  if (kappa < 0) throw UsageError("kappa must be >= 0");
  for (const auto& m : maps) {
    if (m.dim() != dimension) throw UsageError("all maps must share the spec dimension");
    if (!(m.scale() > 0 && m.scale() < 1))
      throw UsageError("contraction ratio must lie in (0,1)");
  }
  if (dimension >= 2) {
    for (const auto& m : maps) {
      // O orthogonal within tolerance
      const int d = dimension;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double acc = 0.0;
          for (int k = 0; k < d; ++k) acc += m.ortho()[k * d + i] * m.ortho()[k * d + j];
          const double want = (i == j) ? 1.0 : 0.0;
          if (std::abs(acc - want) > std::max(tol, 1e-9))
            throw UsageError("orthogonal part fails the orthogonality tolerance");
        }
    }
  }
}

void IfsSpec::finish() {
  if (maps.empty()) throw UsageError("an IFS needs at least two maps");
  r_min = maps[0].scale();
  for (const auto& m : maps) r_min = std::min(r_min, m.scale());
  validate();
}

IfsSpec IfsSpec::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("IFS spec parse error: ") + e.what());
  }
  IfsSpec spec;
  try {
    spec.dimension = j.value("dimension", 1);
    spec.kappa = parse_rational(j.value("kappa", std::string("0")));
    if (j.contains("tolerance")) spec.tol = j.at("tolerance").get<double>();
    if (!j.contains("maps") || !j.at("maps").is_array())
      throw UsageError("IFS spec needs a 'maps' array");
    for (const auto& jm : j.at("maps")) {
      const Rational ratio = parse_rational(jm.at("ratio").get<std::string>());
      const auto& jt = jm.at("translate");
      if (spec.dimension == 1) {
        const bool reflect = jm.value("reflect", false);
        if (!jt.is_array() || jt.size() != 1)
          throw UsageError("translate must be a 1-element array for dimension 1");
        spec.maps.push_back(
            Xform::line(ratio, reflect, parse_rational(jt.at(0).get<std::string>())));
      } else {
        std::vector<double> trans;
        for (const auto& c : jt) trans.push_back(std::stod(c.get<std::string>()));
        std::vector<double> ortho;
        if (jm.contains("orthogonal")) {
          for (const auto& row : jm.at("orthogonal"))
            for (const auto& c : row) ortho.push_back(c.get<double>());
        } else {
          ortho.assign(static_cast<std::size_t>(spec.dimension) * spec.dimension, 0.0);
          for (int i = 0; i < spec.dimension; ++i)
            ortho[static_cast<std::size_t>(i) * spec.dimension + i] = 1.0;
        }
        spec.maps.push_back(Xform::general(spec.dimension, ratio, std::move(ortho), std::move(trans)));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("IFS spec field error: ") + e.what());
  }
  spec.finish();
  return spec;
}

std::string IfsSpec::to_json_text() const {
  nlohmann::json j;
  j["dimension"] = dimension;
  j["kappa"] = format_rational(kappa);
  j["maps"] = nlohmann::json::array();
  for (const auto& m : maps) {
    nlohmann::json jm;
    jm["ratio"] = format_rational(m.scale());
    if (dimension == 1) {
      jm["reflect"] = m.reflect();
      jm["translate"] = {format_rational(m.translate1())};
    } else {
      nlohmann::json jt = nlohmann::json::array();
      for (double c : m.translaten()) jt.push_back(std::to_string(c));
      jm["translate"] = jt;
      nlohmann::json jo = nlohmann::json::array();
      for (int r = 0; r < dimension; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < dimension; ++c) row.push_back(m.ortho()[r * dimension + c]);
        jo.push_back(row);
      }
      jm["orthogonal"] = jo;
    }
    j["maps"].push_back(jm);
  }
  return j.dump(2);
}

std::string word_string(const Word& w, int nmaps) {
  if (w.root()) return "";
  std::string out;
  for (std::size_t i = 0; i < w.syms.size(); ++i) {
    if (nmaps > 9 && i) out.push_back('.');
    if (nmaps > 9)
      out += std::to_string(static_cast<int>(w.syms[i]));
    else
      out.push_back(static_cast<char>('0' + w.syms[i]));
  }
  return out;
}

Xform word_map(const IfsSpec& spec, const Word& w) {
  Xform m = Xform::identity(spec.dimension);
  for (auto s : w.syms) {
    if (s < 1 || s > spec.nmaps()) throw UsageError("word symbol out of range");
    m = m.compose(spec.maps[s - 1]);
  }
  return m;
}

Word extend_word(const IfsSpec& spec, const Word& w, int symbol) {
  if (symbol < 1 || symbol > spec.nmaps()) throw UsageError("word symbol out of range");
  Word c;
  c.syms = w.syms;
  c.syms.push_back(static_cast<std::uint8_t>(symbol));
  c.ratio = w.ratio * spec.maps[symbol - 1].scale();
  return c;
}

bool maps_equal(const IfsSpec& spec, const Xform& f, const Xform& g) {
  if (f.dim() != g.dim()) throw UsageError("cannot compare maps of different dimension");
  return f.equals(g, spec.tol);
}

bool level_membership(const IfsSpec& spec, const Word& w, int n) {
  if (n < 0) throw UsageError("level index must be >= 0");
  if (w.root()) return n == 0;
  const Rational thr = rat_pow(spec.r_min, static_cast<unsigned>(n));
  if (!(w.ratio <= thr)) return false;
  const Rational prefix = w.ratio / spec.maps[w.syms.back() - 1].scale();
  return prefix > thr;
}

void expand_children(const IfsSpec& spec, const Word& w, const Rational& child_threshold,
                     std::vector<Word>& out, const EnumLimits& lim) {
  for (int s = 1; s <= spec.nmaps(); ++s) {
    Word c = extend_word(spec, w, s);
    if (c.ratio <= child_threshold) {
      if (out.size() >= lim.max_vertices_per_level)
        throw CapExceeded("level would exceed the per-level vertex cap of " +
                          std::to_string(lim.max_vertices_per_level) +
                          " (raise it via options or the environment override)");
      out.push_back(std::move(c));
    } else {
      expand_children(spec, c, child_threshold, out, lim);
    }
  }
}

std::vector<Word> enumerate_level(const IfsSpec& spec, int n, const EnumLimits& lim) {
  if (n < 0) throw UsageError("level index must be >= 0");
  std::vector<Word> cur;
  cur.push_back(Word{});
  for (int k = 1; k <= n; ++k) {
    const Rational thr = rat_pow(spec.r_min, static_cast<unsigned>(k));
    std::vector<Word> next;
    for (const auto& w : cur) expand_children(spec, w, thr, next, lim);
    cur = std::move(next);
  }
  std::sort(cur.begin(), cur.end(), shortlex_less);
  return cur;
}

int word_level(const IfsSpec& spec, const Word& w) {
  if (w.root()) return 0;
  // w is in X_n iff prefix > r^n >= ratio; the first n with prefix > r^n
  // is the only candidate since the thresholds decrease
  const Rational prefix = w.ratio / spec.maps[w.syms.back() - 1].scale();
  Rational thr(1);
  for (int n = 0; n < 1 << 20; ++n) {
    if (prefix > thr) return w.ratio <= thr ? n : -1;
    thr *= spec.r_min;
  }
  throw InternalError("word_level failed to terminate");
}

}  // namespace augtree
