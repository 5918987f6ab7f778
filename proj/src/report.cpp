#include "treelip/report.hpp"

#include <sstream>

namespace treelip {

Json to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json to_json(const DepthProfile& profile) {
  Json values = Json::array();
  for (Eigen::Index i = 0; i < profile.values.size(); ++i) values.push_back(profile.values(i));
  return Json{{"first_depth", profile.first_depth}, {"values", std::move(values)}};
}

Json to_json(const NormReport& report) {
  Json sups = Json::array();
  for (Eigen::Index i = 0; i < report.per_depth_sup.values.size(); ++i) {
    sups.push_back(report.per_depth_sup.values(i));
  }
  return Json{{"k", report.k},
              {"value", report.value},
              {"argmax", report.argmax},
              {"per_depth_sup", std::move(sups)},
              {"little_flag", report.little_flag}};
}

Json to_json(const TailDiagnostic& d) {
  return Json{{"quantity", d.quantity},
              {"sup", d.sup},
              {"window_sup", d.window_sup},
              {"window_min", d.window_min},
              {"relative_change", d.relative_change},
              {"converged", d.converged},
              {"growing", d.growing},
              {"decayed", d.decayed},
              {"positive_envelope", d.positive_envelope}};
}

Json to_json(const Classification& c) {
  return Json{{"verdict", std::string(to_string(c.verdict))},
              {"reason", c.reason},
              {"quantity", c.quantity},
              {"value", c.value}};
}

Json to_json(const AnalysisReport& r) {
  Json out;
  out["k"] = r.k;
  out["window"] = r.options.window;
  out["tolerance"] = r.options.tolerance;
  out["sup_inf_psi"] = Json{{"sup", r.bounded.sup_modulus},
                            {"window_sup", r.bounded.modulus.window_sup},
                            {"window_min", r.bounded.modulus.window_min},
                            {"inf", r.below ? Json(r.below->inf_modulus) : Json(nullptr)},
                            {"inf_vertex", r.below ? Json(r.below->inf_vertex) : Json(nullptr)}};
  out["sup_mu_next_Dpsi"] = Json{{"sup", r.bounded.sup_weighted_next},
                                 {"window_sup", r.bounded.weighted.window_sup}};
  out["bounded_verdict"] = to_json(r.bounded.classification);
  out["compact_verdict"] = to_json(r.compact.classification);
  out["bounded_below_verdict"] = r.below ? to_json(r.below->classification)
                                         : Json{{"verdict", "inconclusive"},
                                                {"reason", "operator is not bounded"},
                                                {"quantity", ""},
                                                {"value", nullptr}};
  out["opnorm_lower"] = r.opnorm ? Json(r.opnorm->lower) : Json(nullptr);
  out["opnorm_upper"] = r.opnorm ? Json(r.opnorm->upper) : Json(nullptr);
  out["essnorm_lower"] = r.essnorm ? Json(r.essnorm->lower) : Json(nullptr);
  out["essnorm_upper"] = r.essnorm ? Json(r.essnorm->upper) : Json(nullptr);
  Json convergence = Json::array({to_json(r.bounded.modulus), to_json(r.bounded.weighted)});
  if (r.below) convergence.push_back(to_json(r.below->modulus_inf));
  if (r.essnorm) {
    convergence.push_back(to_json(r.essnorm->a_tail));
    convergence.push_back(to_json(r.essnorm->b_tail));
  }
  out["convergence"] = std::move(convergence);
  return out;
}

Json to_json(const SpectrumReport& r) {
  Json points = Json::array();
  for (const auto& p : r.point_spectrum) {
    points.push_back(Json{{"value", to_json(p.value)}, {"witness", p.witness}});
  }
  auto list = [](const std::vector<Complex>& values) {
    Json a = Json::array();
    for (const Complex& c : values) a.push_back(to_json(c));
    return a;
  };
  return Json{{"point_spectrum", std::move(points)},
              {"closure_extras", list(r.closure_extras)},
              {"sigma", list(r.sigma)},
              {"sigma_ap", list(r.sigma_ap)},
              {"closure_exact", r.closure_exact},
              {"note", r.note}};
}

Json to_json(const EssentialNormBounds& b) {
  Json history = Json::array();
  for (const auto& s : b.history) {
    history.push_back(Json{{"end_depth", s.end_depth}, {"a", s.a}, {"b", s.b}});
  }
  return Json{{"a", b.a},
              {"b", b.b},
              {"lower", b.lower},
              {"upper", b.upper},
              {"history", std::move(history)},
              {"convergence", Json::array({to_json(b.a_tail), to_json(b.b_tail)})}};
}

Json to_json(const EssentialWitness& w) {
  return Json{{"a_route", w.a_route}, {"b_route", w.b_route}, {"hn_norm", w.hn_norm},
              {"p", w.p},             {"vertex", w.vertex},   {"depth", w.depth}};
}

Json to_json(const CheckResult& c) {
  return Json{{"name", c.name},
              {"range", c.range},
              {"pass", c.pass},
              {"worst_violation", c.worst},
              {"detail", c.detail}};
}

Json to_json(const std::vector<CheckResult>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) out.push_back(to_json(c));
  return out;
}

namespace {

constexpr std::size_t kArrayPreview = 6;

void render(std::ostringstream& out, const Json& node, const std::string& indent) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string label = node.is_object() ? it.key() : "-";
    const Json& value = it.value();
    if (value.is_object()) {
      out << indent << label << ":\n";
      render(out, value, indent + "  ");
    } else if (value.is_array() && !value.empty() && value.front().is_structured()) {
      out << indent << label << ": (" << value.size() << " entries)\n";
      std::size_t shown = 0;
      for (const Json& entry : value) {
        if (shown++ == kArrayPreview) {
          out << indent << "  ...\n";
          break;
        }
        if (entry.is_object()) {
          out << indent << "  -\n";
          render(out, entry, indent + "    ");
        } else {
          out << indent << "  - " << entry.dump() << '\n';
        }
      }
    } else if (value.is_array() && value.size() > kArrayPreview) {
      out << indent << label << ": [";
      for (std::size_t i = 0; i < kArrayPreview; ++i) out << (i ? ", " : "") << value[i].dump();
      out << ", ... " << value.size() << " values]\n";
    } else {
      out << indent << label << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
          << '\n';
    }
  }
}

}  // namespace

std::string render_text(const Json& report) {
  std::ostringstream out;
  if (report.is_structured()) {
    render(out, report, "");
  } else {
    out << report.dump() << '\n';
  }
  return out.str();
}

}  // namespace treelip
