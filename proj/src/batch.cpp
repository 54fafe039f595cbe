#include "colearn/batch.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <boost/integer/common_factor.hpp>
#include "json.hpp"

namespace colearn {

using json = nlohmann::json;

namespace {

BigNat decimal(std::string digits) {
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw std::runtime_error("not decimal");
  const auto nz = digits.find_first_not_of('0');
  return nz == std::string::npos ? BigNat(0) : BigNat(digits.substr(nz));
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      const auto dot = text.find('.');
      if (dot == std::string::npos) return Rational(decimal(text));
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      BigNat den = 1;
      for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
      return Rational(decimal(digits), den);
    }
    const BigNat den = decimal(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return Rational(decimal(text.substr(0, slash)), den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("not a rational: '" + text + "'");
  }
}

std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << '/' << denominator(q);
  return os.str();
}

const Rational& ProbabilisticHypothesis::operator()(Instance x) const {
  auto it = values.find(x);
  if (it == values.end()) throw std::out_of_range("instance " + std::to_string(x) + " was not queried");
  return it->second;
}

ProbabilisticHypothesis ProbabilisticHypothesis::from_row(Row r, const std::vector<Instance>& xs) {
  ProbabilisticHypothesis h;
  for (auto x : xs) h.values[x] = x < kMaxDomain ? row_value(r, x) : 0;
  return h;
}

FiniteDistribution::FiniteDistribution(std::vector<WeightedExample> support) : support_(std::move(support)) {
  if (support_.empty()) throw std::invalid_argument("distribution with empty support");
  Rational total = 0;
  for (const auto& z : support_) {
    if (z.weight <= 0) throw std::invalid_argument("distribution weights must be positive");
    if (z.y > 1) throw std::invalid_argument("labels must be 0 or 1");
    total += z.weight;
  }
  if (total != 1) throw std::invalid_argument("distribution weights sum to " + to_string(total) + ", not 1");
}

FiniteDistribution FiniteDistribution::uniform(const std::vector<LabeledInstance>& items) {
  std::vector<WeightedExample> support;
  for (const auto& z : items) support.push_back({z.x, z.y, Rational(1, static_cast<long>(items.size()))});
  return FiniteDistribution(std::move(support));
}

FiniteDistribution FiniteDistribution::from_json(const std::string& text) {
  const json j = json::parse(text);
  std::vector<WeightedExample> support;
  for (const auto& e : j.at("support")) {
    WeightedExample z;
    z.x = e.at("x").get<Instance>();
    z.y = static_cast<Label>(e.at("y").get<int>());
    const auto& w = e.at("weight");
    if (w.is_string())
      z.weight = parse_rational(w.get<std::string>());
    else if (w.is_number_integer())
      z.weight = Rational(w.get<long long>());
    else
      z.weight = parse_rational(w.dump());
    support.push_back(std::move(z));
  }
  return FiniteDistribution(std::move(support));
}

FiniteDistribution FiniteDistribution::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open distribution file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string FiniteDistribution::to_json() const {
  json j;
  j["support"] = json::array();
  for (const auto& z : support_) j["support"].push_back({{"x", z.x}, {"y", z.y}, {"weight", to_string(z.weight)}});
  return j.dump();
}

std::vector<Instance> FiniteDistribution::instances() const {
  std::set<Instance> xs;
  for (const auto& z : support_) xs.insert(z.x);
  return {xs.begin(), xs.end()};
}

Sample FiniteDistribution::draw(std::size_t m, std::mt19937_64& rng) const {
  // Exact draw: integer numerators over the common denominator.
  BigNat common = 1;
  for (const auto& z : support_) common = boost::integer::lcm(common, BigNat(denominator(z.weight)));
  std::vector<BigNat> cumulative;
  BigNat acc = 0;
  for (const auto& z : support_) {
    acc += numerator(z.weight) * (common / denominator(z.weight));
    cumulative.push_back(acc);
  }
  if (common > std::numeric_limits<std::uint64_t>::max())
    throw std::invalid_argument("distribution denominators too large to sample");
  std::uniform_int_distribution<std::uint64_t> pick(0, static_cast<std::uint64_t>(common) - 1);
  Sample s;
  for (std::size_t i = 0; i < m; ++i) {
    const BigNat u = pick(rng);
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto& z = support_[static_cast<std::size_t>(it - cumulative.begin())];
    s.push_back({z.x, z.y});
  }
  return s;
}

Rational point_loss(const Rational& hx, Label y) {
  const Rational d = hx - Rational(y);
  return d < 0 ? Rational(-d) : d;
}

Rational point_loss(const ProbabilisticHypothesis& h, const LabeledInstance& z) { return point_loss(h(z.x), z.y); }

RationalPredictor as_rational(LearnerPtr a) {
  return [a](const Sample& s, Instance x) { return Rational(a->predict_or_throw(s, x)); };
}

Rational expected_regret(const RationalPredictor& a, const FiniteClass& h, std::size_t t, std::size_t domain_cap) {
  double size = 1;
  for (std::size_t i = 0; i < t; ++i) size *= 2.0 * static_cast<double>(domain_cap);
  if (size > 1e6) throw std::invalid_argument("regret enumeration exceeds 10^6 sequences");
  if (h.empty()) throw std::invalid_argument("regret against an empty class");
  Rational best = 0;
  bool any = false;
  Sample s;
  std::function<void(const Rational&)> walk = [&](const Rational& loss) {
    if (s.size() == t) {
      std::size_t comparator = std::numeric_limits<std::size_t>::max();
      for (Row r : h.rows()) {
        std::size_t l = 0;
        for (const auto& z : s)
          if ((z.x < h.domain_size() ? row_value(r, z.x) : 0) != z.y) ++l;
        comparator = std::min(comparator, l);
      }
      const Rational regret = loss - Rational(comparator);
      if (!any || regret > best) best = regret;
      any = true;
      return;
    }
    for (Instance x = 0; x < domain_cap; ++x) {
      const Rational p = a(s, x);
      for (Label y : {Label{0}, Label{1}}) {
        s.push_back({x, y});
        walk(loss + point_loss(p, y));
        s.pop_back();
      }
    }
  };
  walk(0);
  return best;
}

ProbabilisticHypothesis online_to_batch(const Learner& a, const Sample& s, const std::vector<Instance>& queries) {
  if (s.empty()) throw std::invalid_argument("online-to-batch conversion needs a nonempty sample");
  ProbabilisticHypothesis h;
  for (auto x : queries) {
    Rational sum = 0;
    for (std::size_t t = 0; t < s.size(); ++t) sum += a.predict_or_throw(s.prefix(t), x);
    h.values[x] = sum / static_cast<long>(s.size());
  }
  return h;
}

Rational distribution_error(const ProbabilisticHypothesis& h, const FiniteDistribution& d) {
  Rational total = 0;
  for (const auto& z : d.support()) total += z.weight * point_loss(h(z.x), z.y);
  return total;
}

Rational distribution_error(Row r, const FiniteDistribution& d) {
  return distribution_error(ProbabilisticHypothesis::from_row(r, d.instances()), d);
}

Rational class_error(const FiniteClass& h, const FiniteDistribution& d) {
  if (h.empty()) throw std::invalid_argument("error of an empty class");
  std::optional<Rational> best;
  for (Row r : h.rows()) {
    const Rational e = distribution_error(r, d);
    if (!best || e < *best) best = e;
  }
  return *best;
}

PacReport pac_evaluate(const Learner& a, const FiniteClass& h, const FiniteDistribution& d, const Rational& epsilon,
                       const Rational& delta, std::size_t m, std::size_t trials, std::uint64_t seed) {
  if (trials == 0 || m == 0) throw std::invalid_argument("pac evaluation needs m > 0 and trials > 0");
  PacReport rep;
  rep.trials = trials;
  rep.epsilon = epsilon;
  rep.delta = delta;
  rep.class_error = class_error(h, d);
  std::mt19937_64 rng(seed);
  const auto xs = d.instances();
  Rational sum = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const Sample s = d.draw(m, rng);
    const Rational e = distribution_error(online_to_batch(a, s, xs), d);
    if (e > rep.class_error + epsilon) ++rep.failures;
    rep.worst_error = std::max(rep.worst_error, e);
    sum += e;
  }
  rep.mean_error = sum / static_cast<long>(trials);
  rep.passed = Rational(static_cast<long>(rep.failures), static_cast<long>(trials)) <= delta;
  return rep;
}

LabelingSearch find_unrealizable_labeling(const FiniteClass& h, const std::vector<Instance>& xs) {
  if (xs.size() > 20) throw std::invalid_argument("labeling search limited to 20 instances");
  const std::size_t k = xs.size();
  // Pattern bit (k - 1 - i) holds the label of xs[i], so numeric order is
  // lexicographic order.
  std::set<std::uint32_t> patterns;
  for (Row r : h.rows()) {
    std::uint32_t p = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (xs[i] < h.domain_size() && row_value(r, xs[i])) p |= std::uint32_t{1} << (k - 1 - i);
    patterns.insert(p);
  }
  LabelingSearch out;
  out.realized_patterns = patterns.size();
  const std::uint64_t all = std::uint64_t{1} << k;
  for (std::uint64_t p = 0; p < all; ++p) {
    if (patterns.count(static_cast<std::uint32_t>(p))) continue;
    std::vector<Label> g(k);
    for (std::size_t i = 0; i < k; ++i) g[i] = static_cast<Label>((p >> (k - 1 - i)) & 1);
    out.unrealized = std::move(g);
    break;
  }
  return out;
}

}  // namespace colearn
