#include "loewner/serialize.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace loewner {
namespace {

using nlohmann::json;

json complexToJson(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complexFromJson(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("serialize: complex values are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json complexVectorToJson(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complexToJson(v[i]));
  return out;
}

CVector complexVectorFromJson(const json& j) {
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] = complexFromJson(j[static_cast<std::size_t>(i)]);
  return v;
}

void requireType(const json& j, const char* type) {
  if (!j.is_object() || j.value("type", std::string()) != type)
    throw std::invalid_argument(std::string("serialize: expected object of type '") +
                                type + "'");
}

/// Power-of-two grid fine enough to carry every mode of the conjugacy's
/// circle restriction.
int conjugacySampleGrid(const ConformalConjugacy& h) {
  int m = 256;
  const int needed = 4 * (h.circleRestriction().displacement().modes() + 1);
  while (m < needed) m *= 2;
  return m;
}

}  // namespace

json toJson(const CircleMeasure& mu) {
  json atoms = json::array();
  for (const Atom& a : mu.atoms())
    atoms.push_back({{"position", complexToJson(a.position)}, {"mass", a.mass}});
  json density = json::array();
  for (int j = 0; j < mu.gridSize(); ++j) density.push_back(mu.densitySamples()[j]);
  return {{"type", "circle_measure"},
          {"grid_size", mu.gridSize()},
          {"density", std::move(density)},
          {"atoms", std::move(atoms)}};
}

CircleMeasure circleMeasureFromJson(const json& j) {
  requireType(j, "circle_measure");
  const auto& density = j.at("density");
  RVector samples(static_cast<Eigen::Index>(density.size()));
  for (Eigen::Index i = 0; i < samples.size(); ++i)
    samples[i] = density[static_cast<std::size_t>(i)].get<double>();
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms"))
    atoms.push_back({complexFromJson(a.at("position")), a.at("mass").get<double>()});
  return CircleMeasure::fromDensity(samples, std::move(atoms), /*renormalize=*/false);
}

json toJson(const ConformalConjugacy& h) {
  json out{{"type", "conformal_conjugacy"}};
  switch (h.kind()) {
    case ConformalConjugacy::Kind::Identity:
      out["kind"] = "identity";
      break;
    case ConformalConjugacy::Kind::Moebius:
      out["kind"] = "moebius";
      out["parameter"] = complexToJson(h.moebiusParameter());
      break;
    case ConformalConjugacy::Kind::FourierPerturbation:
      out["kind"] = "fourier_perturbation";
      out["coefficients"] = complexVectorToJson(h.perturbation().coeffs());
      break;
    case ConformalConjugacy::Kind::AnnulusSeries: {
      out["kind"] = "annulus_series";
      const int m = conjugacySampleGrid(h);
      CVector samples(m);
      for (int j = 0; j < m; ++j)
        samples[j] = h.eval(std::polar(1.0, kTwoPi * j / m));
      out["samples"] = complexVectorToJson(samples);
      break;
    }
  }
  return out;
}

ConformalConjugacy conjugacyFromJson(const json& j) {
  requireType(j, "conformal_conjugacy");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "identity") return ConformalConjugacy::identity();
  if (kind == "moebius")
    return ConformalConjugacy::moebius(complexFromJson(j.at("parameter")));
  if (kind == "fourier_perturbation")
    return ConformalConjugacy::fourierPerturbation(
        TrigSeries(complexVectorFromJson(j.at("coefficients"))));
  if (kind == "annulus_series")
    return ConformalConjugacy::annulusSeries(complexVectorFromJson(j.at("samples")));
  throw std::invalid_argument("serialize: unknown conjugacy kind '" + kind + "'");
}

json toJson(const CircleMap& g) {
  json out{{"type", "circle_map"},
           {"rotation_number", g.rotationNumber()},
           {"rotation_tag",
            g.rotationTag() == RotationTag::Constructed ? "constructed" : "estimated"},
           {"grid_size", g.gridSize()},
           {"samples", complexVectorToJson(g.series().samplesOnCircle(g.gridSize()))}};
  if (g.linearizer()) {
    out["linearizer"] = toJson(*g.linearizer());
  } else {
    out["linearizer"] = nullptr;
  }
  // Informational only; recomputed from the samples on load.
  out["annulus"] = json::array({g.annulusInner(), g.annulusOuter()});
  out["circle_residual"] = g.circleResidual();
  out["reflection_residual"] = g.reflectionResidual();
  return out;
}

CircleMap circleMapFromJson(const json& j) {
  requireType(j, "circle_map");
  const std::string tagName = j.at("rotation_tag").get<std::string>();
  if (tagName != "constructed" && tagName != "estimated")
    throw std::invalid_argument("serialize: unknown rotation tag '" + tagName + "'");
  const RotationTag tag =
      tagName == "constructed" ? RotationTag::Constructed : RotationTag::Estimated;
  std::optional<ConformalConjugacy> lin;
  if (!j.at("linearizer").is_null()) lin = conjugacyFromJson(j.at("linearizer"));
  return CircleMap::fromCircleSamples(complexVectorFromJson(j.at("samples")),
                                      j.at("rotation_number").get<double>(), tag,
                                      std::move(lin));
}

std::string formatNumber(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string csvTable(const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    if (row.size() > header.size())
      throw std::invalid_argument("csvTable: row wider than the header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += formatNumber(row[i]);
    }
    out += '\n';
  }
  return out;
}

void writeTextFile(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  f << content;
  if (!f) throw std::runtime_error("writeTextFile: cannot write " + path);
}

}  // namespace loewner
