#include "pdm/catalog.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <sstream>

namespace pdm::catalog {

namespace {

double l1_size(const Point& x) { return std::abs(x[0]) + std::abs(x[1]); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s, const std::string& ctx) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error("catalog: bad numeric parameter '" + s + "' in '" + ctx + "'");
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Coefficients depend on k_1 only; anything with k_2 != 0 vanishes.
Potential one_axis(std::string name, std::function<cplx(int)> c, std::function<cplx(double)> f, int support, bool real, bool even) {
  Potential p;
  p.name = std::move(name);
  p.coeff = [c = std::move(c)](const MultiIndex& k) { return k[1] == 0 ? c(k[0]) : cplx{}; };
  p.value = [f = std::move(f)](const Point& x) { return f(x[0]); };
  p.support = support;
  p.real = real;
  p.even = even;
  return p;
}

}  // namespace

Symbol polynomial(std::vector<double> coeffs) {
  double order = 0.0;
  std::string name = "poly:";
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] != 0.0) order = static_cast<double>(j);
    name += (j ? "," : "") + fmt(coeffs[j]);
  }
  return {name,
          [coeffs = std::move(coeffs)](const Point& x) {
            const double r = l1_size(x);
            double acc = 0.0;
            for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * r + *it;
            return cplx{acc};
          },
          order};
}

Symbol abs_power(double p) {
  return {"abs:" + fmt(p), [p](const Point& x) { return cplx{std::pow(l1_size(x), p)}; }, p};
}

Symbol japanese(double r) {
  return {"japanese:" + fmt(r),
          [r](const Point& x) { return cplx{std::pow(1.0 + x[0] * x[0] + x[1] * x[1], 0.5 * r)}; }, r};
}

Symbol derivative() {
  return {"dx", [](const Point& x) { return cplx{0.0, x[0]}; }, 1.0};
}

Symbol waterwave_omega(double mu) {
  if (mu < 0.0) throw Error("waterwave_omega: mu must be nonnegative");
  if (mu == 0.0) return {"omega:0", [](const Point& x) { return cplx{l1_size(x)}; }, 1.0};
  const double sm = std::sqrt(mu);
  return {"omega:" + fmt(mu),
          [sm](const Point& x) {
            const double k = l1_size(x);
            return cplx{std::sqrt(k * std::tanh(sm * k) / sm)};
          },
          0.5};
}

Symbol waterwave_G(double mu) {
  if (mu < 0.0) throw Error("waterwave_G: mu must be nonnegative");
  const double sm = std::sqrt(mu);
  return {"G:" + fmt(mu), [sm](const Point& x) { return cplx{1.0 / std::cosh(sm * l1_size(x))}; }, 0.0};
}

Symbol sech(double scale) {
  return {"sech:" + fmt(scale), [scale](const Point& x) { return cplx{1.0 / std::cosh(scale * l1_size(x))}; }, 0.0};
}

Potential constant(double c) {
  return one_axis("const:" + fmt(c), [c](int k) { return k == 0 ? cplx{c} : cplx{}; }, [c](double) { return cplx{c}; }, 0,
                  true, true);
}

Potential cos_potential(double amplitude) {
  return one_axis(
      "cos:" + fmt(amplitude), [amplitude](int k) { return std::abs(k) == 1 ? cplx{0.5 * amplitude} : cplx{}; },
      [amplitude](double x) { return cplx{amplitude * std::cos(x)}; }, 1, true, true);
}

Potential sin_potential(double amplitude) {
  // sin x = (e^{ix} - e^{-ix}) / 2i
  return one_axis(
      "sin:" + fmt(amplitude),
      [amplitude](int k) {
        if (k == 1) return cplx{0.0, -0.5 * amplitude};
        if (k == -1) return cplx{0.0, 0.5 * amplitude};
        return cplx{};
      },
      [amplitude](double x) { return cplx{amplitude * std::sin(x)}; }, 1, true, false);
}

Potential exp_decay(double rate) {
  if (rate <= 0.0) throw Error("exp_decay: rate must be positive");
  const int support = static_cast<int>(std::ceil(58.0 / rate));
  return one_axis(
      "exp_decay:" + fmt(rate), [rate](int k) { return cplx{std::exp(-rate * std::abs(k))}; },
      [rate](double x) { return cplx{std::sinh(rate) / (std::cosh(rate) - std::cos(x))}; }, support, true, true);
}

Potential imaginary_cos() {
  return one_axis(
      "icos", [](int k) { return std::abs(k) == 1 ? cplx{0.0, 0.5} : cplx{}; },
      [](double x) { return cplx{0.0, std::cos(x)}; }, 1, false, true);
}

Potential rough(std::uint64_t seed, int support) {
  if (support < 1) throw Error("rough: support must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto coeffs = std::make_shared<std::vector<cplx>>(static_cast<std::size_t>(2 * support + 1));
  auto& c = *coeffs;
  c[static_cast<std::size_t>(support)] = u(rng);
  for (int k = 1; k <= support; ++k) {
    const cplx z{u(rng), u(rng)};
    c[static_cast<std::size_t>(support + k)] = z;
    c[static_cast<std::size_t>(support - k)] = std::conj(z);
  }
  return one_axis(
      "rough:" + std::to_string(seed) + ":" + std::to_string(support),
      [coeffs, support](int k) { return std::abs(k) <= support ? (*coeffs)[static_cast<std::size_t>(k + support)] : cplx{}; },
      [coeffs, support](double x) {
        cplx acc{};
        for (int k = -support; k <= support; ++k) acc += (*coeffs)[static_cast<std::size_t>(k + support)] * std::polar(1.0, k * x);
        return cplx{acc.real()};
      },
      support, true, false);
}

Symbol symbol_by_name(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw Error("catalog: empty symbol name");
  const std::string& head = parts[0];
  auto param = [&](double dflt) { return parts.size() > 1 ? parse_double(parts[1], spec) : dflt; };
  if (head == "one") return polynomial({1.0});
  if (head == "abs") return abs_power(param(2.0));
  if (head == "japanese") return japanese(param(1.0));
  if (head == "dx") return derivative();
  if (head == "omega") return waterwave_omega(param(1.0));
  if (head == "G") return waterwave_G(param(1.0));
  if (head == "sech") return sech(param(1.0));
  if (head == "poly") {
    if (parts.size() < 2) throw Error("catalog: poly needs coefficients, e.g. poly:0,0,1");
    std::vector<double> c;
    for (const auto& s : split(parts[1], ',')) c.push_back(parse_double(s, spec));
    return polynomial(std::move(c));
  }
  throw Error("catalog: unknown symbol '" + spec + "'");
}

Potential potential_by_name(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw Error("catalog: empty potential name");
  const std::string& head = parts[0];
  auto param = [&](std::size_t i, double dflt) { return parts.size() > i ? parse_double(parts[i], spec) : dflt; };
  if (head == "const") return constant(param(1, 1.0));
  if (head == "cos") return cos_potential(param(1, 1.0));
  if (head == "sin") return sin_potential(param(1, 1.0));
  if (head == "exp_decay") return exp_decay(param(1, 1.0));
  if (head == "icos") return imaginary_cos();
  if (head == "rough")
    return rough(static_cast<std::uint64_t>(param(1, 1.0)), static_cast<int>(param(2, 16.0)));
  throw Error("catalog: unknown potential '" + spec + "'");
}

std::vector<ProbeInfo> list_probes() {
  return {
      {"one", "symbol", "constant symbol 1 (identity), order 0"},
      {"abs:p", "symbol", "|x|^p, order p"},
      {"japanese:r", "symbol", "(1+|x|^2)^{r/2}, order r"},
      {"poly:c0,c1,...", "symbol", "polynomial in |x|"},
      {"dx", "symbol", "i x_1 (first derivative), order 1"},
      {"omega:mu", "symbol", "water-wave dispersion sqrt(|k| tanh(sqrt(mu)|k|)/sqrt(mu)), order 1/2"},
      {"G:mu", "symbol", "sech(sqrt(mu)|k|), smoothing"},
      {"sech:a", "symbol", "sech(a|k|), smoothing"},
      {"const:c", "potential", "constant c"},
      {"cos:a", "potential", "a cos x (band-limited)"},
      {"sin:a", "potential", "a sin x (band-limited)"},
      {"exp_decay:a", "potential", "Fourier coefficients e^{-a|k|}"},
      {"icos", "potential", "i cos x, non-real control"},
      {"rough:seed:L", "potential", "bounded random real potential supported on |k| <= L"},
  };
}

}  // namespace pdm::catalog
