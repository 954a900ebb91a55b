#include "solspace/box.hpp"

#include <algorithm>
#include <stdexcept>

namespace solspace {

namespace {

bool is_frozen(std::span<const bool> frozen, std::size_t i) {
  return i < frozen.size() && frozen[i];
}

}  // namespace

Box Box::design_space(std::span<const DesignVariable> variables) {
  std::vector<Interval> iv;
  iv.reserve(variables.size());
  for (const auto& v : variables) iv.push_back({v.ds_lower, v.ds_upper});
  return Box(std::move(iv));
}

bool Box::contains(const DesignPoint& x) const {
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (!intervals_[i].contains(x[i])) return false;
  }
  return true;
}

bool Box::interior_contains(const DesignPoint& x) const {
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (!(x[i] > intervals_[i].lower && x[i] < intervals_[i].upper)) return false;
  }
  return true;
}

bool Box::valid_for(std::span<const DesignVariable> variables) const {
  if (intervals_.size() != variables.size()) return false;
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& iv = intervals_[i];
    if (!(iv.lower <= iv.upper)) return false;
    if (iv.lower < variables[i].ds_lower || iv.upper > variables[i].ds_upper) return false;
  }
  return true;
}

double mu(const Box& box, std::span<const DesignVariable> variables) {
  double v = 1.0;
  for (std::size_t i = 0; i < box.dimension(); ++i) v *= box[i].width() / variables[i].width();
  return v;
}

std::vector<DesignPoint> sample_uniform(const Box& box, std::size_t n, Rng& rng) {
  std::vector<DesignPoint> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> x(box.dimension());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(box[i].lower, box[i].upper);
    out.emplace_back(std::move(x));
  }
  return out;
}

Box trim(const Box& box, std::span<const ClassifiedSample> samples,
         std::span<const DesignVariable> variables, std::span<const bool> frozen) {
  Box current = box;
  const std::size_t d = box.dimension();

  std::vector<const DesignPoint*> good;
  for (const auto& s : samples) {
    if (s.good) good.push_back(&s.point);
  }

  for (const auto& s : samples) {
    if (s.good || !current.interior_contains(s.point)) continue;
    const DesignPoint& bad = s.point;

    bool have = false;
    std::size_t best_retained = 0;
    double best_mu = 0.0;
    Box best_box;
    // Candidates enumerate dimension-major, lower part first, so strict
    // comparisons implement the dimension and side tie-breaks.
    for (std::size_t i = 0; i < d; ++i) {
      if (is_frozen(frozen, i)) continue;
      for (int keep_upper = 0; keep_upper < 2; ++keep_upper) {
        Box cand = current;
        if (keep_upper) {
          cand[i].lower = bad[i];
        } else {
          cand[i].upper = bad[i];
        }
        std::size_t retained = 0;
        for (const DesignPoint* g : good) {
          if (!cand.contains(*g)) continue;
          // Points on the cut face count as removed.
          if ((*g)[i] == bad[i]) continue;
          ++retained;
        }
        const double cand_mu = mu(cand, variables);
        if (!have || retained > best_retained ||
            (retained == best_retained && cand_mu > best_mu)) {
          have = true;
          best_retained = retained;
          best_mu = cand_mu;
          best_box = std::move(cand);
        }
      }
    }
    if (have) current = std::move(best_box);
  }
  return current;
}

Box grow(const Box& box, double factor, std::span<const DesignVariable> variables,
         std::span<const bool> frozen) {
  if (factor < 1.0) throw std::invalid_argument("growth factor must be >= 1");
  Box out = box;
  for (std::size_t i = 0; i < box.dimension(); ++i) {
    if (is_frozen(frozen, i)) continue;
    const double mid = 0.5 * (box[i].lower + box[i].upper);
    const double half = 0.5 * box[i].width() * factor;
    out[i].lower = std::max(variables[i].ds_lower, std::min(box[i].lower, mid - half));
    out[i].upper = std::min(variables[i].ds_upper, std::max(box[i].upper, mid + half));
  }
  return out;
}

nlohmann::json to_json(const Box& box) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& iv : box.intervals()) arr.push_back({iv.lower, iv.upper});
  return arr;
}

Box box_from_json(const nlohmann::json& intervals) {
  std::vector<Interval> iv;
  for (const auto& pair : intervals) {
    if (!pair.is_array() || pair.size() != 2) throw std::invalid_argument("interval must be [lower, upper]");
    iv.push_back({pair[0].get<double>(), pair[1].get<double>()});
  }
  return Box(std::move(iv));
}

}  // namespace solspace
