#include "minrisk/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "minrisk/config.hpp"
#include "minrisk/replica.hpp"

namespace minrisk {

namespace {

using nlohmann::json;

json summary_to_json_value(const Summary& s) {
  json node;
  node["n"] = s.n;
  node["mean"] = std::isnan(s.mean) ? json() : json(s.mean);
  node["se"] = std::isnan(s.se) ? json() : json(s.se);
  return node;
}

void append_row(std::string& out, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_17g(values[i]);
  }
  out += '\n';
}

struct PanelSeries {
  std::string title;
  std::vector<double> pred_x, pred_y;        // prediction curve
  std::vector<double> x, y, se;              // empirical points
  double dashed_level = std::numeric_limits<double>::quiet_NaN();
};

std::string render_panel(const PanelSeries& panel, double origin_x) {
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  auto grow = [&](double px, double py) {
    if (!std::isfinite(px) || !std::isfinite(py)) return;
    lo_x = std::min(lo_x, px);
    hi_x = std::max(hi_x, px);
    lo_y = std::min(lo_y, py);
    hi_y = std::max(hi_y, py);
  };
  for (std::size_t i = 0; i < panel.pred_x.size(); ++i)
    grow(panel.pred_x[i], panel.pred_y[i]);
  for (std::size_t i = 0; i < panel.x.size(); ++i) {
    const double bar = std::isnan(panel.se[i]) ? 0.0 : panel.se[i];
    grow(panel.x[i], panel.y[i] - bar);
    grow(panel.x[i], panel.y[i] + bar);
  }
  if (std::isfinite(panel.dashed_level)) grow(lo_x, panel.dashed_level);
  if (lo_x > hi_x) {
    lo_x = 0;
    hi_x = 1;
  }
  if (lo_y > hi_y) {
    lo_y = 0;
    hi_y = 1;
  }
  const double pad_x = (hi_x - lo_x) * 0.05 + 1e-12;
  const double pad_y = (hi_y - lo_y) * 0.05 + 1e-12;
  lo_x -= pad_x;
  hi_x += pad_x;
  lo_y -= pad_y;
  hi_y += pad_y;

  const double width = 320, height = 250, left = 50, top = 30;
  auto sx = [&](double v) {
    return origin_x + left + (v - lo_x) / (hi_x - lo_x) * width;
  };
  auto sy = [&](double v) {
    return top + height - (v - lo_y) / (hi_y - lo_y) * height;
  };

  std::ostringstream svg;
  svg.setf(std::ios::fixed);
  svg.precision(2);
  svg << "<rect x='" << origin_x + left << "' y='" << top << "' width='"
      << width << "' height='" << height
      << "' fill='none' stroke='#444' stroke-width='1'/>\n";
  svg << "<text x='" << origin_x + left + width / 2 << "' y='" << top - 10
      << "' text-anchor='middle' font-size='14'>" << panel.title
      << "</text>\n";
  svg << "<text x='" << origin_x + left + width / 2 << "' y='"
      << top + height + 35 << "' text-anchor='middle' font-size='12'>R</text>\n";

  for (int t = 0; t <= 4; ++t) {
    const double vx = lo_x + (hi_x - lo_x) * t / 4;
    const double vy = lo_y + (hi_y - lo_y) * t / 4;
    char label[32];
    svg << "<line x1='" << sx(vx) << "' y1='" << top + height << "' x2='"
        << sx(vx) << "' y2='" << top + height + 4
        << "' stroke='#444' stroke-width='1'/>\n";
    std::snprintf(label, sizeof label, "%.3g", vx);
    svg << "<text x='" << sx(vx) << "' y='" << top + height + 18
        << "' text-anchor='middle' font-size='10'>" << label << "</text>\n";
    svg << "<line x1='" << origin_x + left - 4 << "' y1='" << sy(vy)
        << "' x2='" << origin_x + left << "' y2='" << sy(vy)
        << "' stroke='#444' stroke-width='1'/>\n";
    std::snprintf(label, sizeof label, "%.3g", vy);
    svg << "<text x='" << origin_x + left - 6 << "' y='" << sy(vy) + 3
        << "' text-anchor='end' font-size='10'>" << label << "</text>\n";
  }

  if (std::isfinite(panel.dashed_level)) {
    svg << "<line x1='" << sx(lo_x) << "' y1='" << sy(panel.dashed_level)
        << "' x2='" << sx(hi_x) << "' y2='" << sy(panel.dashed_level)
        << "' stroke='#333' stroke-width='1' stroke-dasharray='6,4'/>\n";
  }

  bool open = false;
  std::ostringstream path;
  for (std::size_t i = 0; i < panel.pred_x.size(); ++i) {
    if (!std::isfinite(panel.pred_y[i])) {
      open = false;
      continue;
    }
    path << (open ? " L " : " M ") << sx(panel.pred_x[i]) << ' '
         << sy(panel.pred_y[i]);
    open = true;
  }
  svg << "<path d='" << path.str()
      << "' fill='none' stroke='#e67e22' stroke-width='2'/>\n";

  for (std::size_t i = 0; i < panel.x.size(); ++i) {
    if (!std::isfinite(panel.y[i])) continue;
    const double cx = sx(panel.x[i]);
    const double cy = sy(panel.y[i]);
    if (!std::isnan(panel.se[i])) {
      svg << "<line x1='" << cx << "' y1='" << sy(panel.y[i] - panel.se[i])
          << "' x2='" << cx << "' y2='" << sy(panel.y[i] + panel.se[i])
          << "' stroke='#2471a3' stroke-width='1.5'/>\n";
    }
    svg << "<circle cx='" << cx << "' cy='" << cy
        << "' r='2.5' fill='#2471a3'/>\n";
  }
  return svg.str();
}

}  // namespace

std::string format_17g(double value) {
  if (std::isnan(value)) return "";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string predictions_csv(const MomentSet& moments, double alpha,
                            const std::vector<double>& r_grid) {
  std::string out = "R,epsilon,q_w,sharpe,epsilon_or,q_w_or\n";
  for (double r : r_grid) {
    const replica::ReplicaPrediction p = replica::predict(moments, alpha, r);
    append_row(out, {r, p.epsilon, p.q_w, p.sharpe, p.epsilon_or, p.q_w_or});
  }
  return out;
}

std::string scalars_csv(const MomentSet& moments, double alpha) {
  const replica::SharpeTriple t = replica::max_sharpe(moments, alpha);
  std::string out = "name,value\n";
  auto line = [&out](const char* name, double value) {
    out += name;
    out += ',';
    out += format_17g(value);
    out += '\n';
  };
  line("alpha", alpha);
  line("mean_inv_v", moments.m_v1);
  line("mean_inv_v_sq", moments.m_v2);
  line("R1", moments.r1);
  line("R2", moments.r2);
  line("V1", moments.v1);
  line("V2", moments.v2);
  line("R_star", t.r_star);
  line("S_R_star", t.s_at_rstar);
  line("S_R1", t.s_at_r1);
  line("S_inf", t.s_at_inf);
  line("kappa", alpha / (alpha - 1.0));
  line("kappa_prime", alpha * alpha / ((alpha - 1.0) * (alpha - 1.0)));
  line("epsilon0", replica::min_risk_budget_only(moments, alpha));
  line("q_w0", replica::concentration_budget_only(moments, alpha));
  return out;
}

std::string dual_bounds_csv(const MomentSet& moments, double alpha,
                            const std::vector<double>& epsilons) {
  std::string out = "epsilon,r_max,r_min\n";
  for (double eps : epsilons) {
    const replica::ReturnBounds bounds =
        replica::return_bounds(moments, alpha, eps);
    append_row(out, {eps, bounds.r_max, bounds.r_min});
  }
  return out;
}

std::string summary_csv(const ExperimentSummary& summary) {
  std::string out =
      "R,n_ok,eps_mean,eps_se,eps_pred,qw_mean,qw_se,qw_pred,"
      "sharpe_mean,sharpe_se,sharpe_pred,eps_or_mean,eps_or_se,eps_or_pred,"
      "eps_prime_mean,eps_prime_se,eps_prime_pred,kappa_hat,kappa_prime_hat\n";
  for (const RRowStats& row : summary.rows) {
    out += format_17g(row.r);
    out += ',';
    out += std::to_string(row.n_ok);
    out += ',';
    std::string tail;
    append_row(tail,
               {row.epsilon.mean, row.epsilon.se, row.prediction.epsilon,
                row.q_w.mean, row.q_w.se, row.prediction.q_w,
                row.sharpe.mean, row.sharpe.se, row.prediction.sharpe,
                row.epsilon_or.mean, row.epsilon_or.se,
                row.prediction.epsilon_or, row.epsilon_prime.mean,
                row.epsilon_prime.se, row.prediction.epsilon_prime,
                row.kappa_hat, row.kappa_prime_hat});
    out += tail;
  }
  return out;
}

std::string summary_json(const ExperimentSummary& summary) {
  json root;
  root["config"] = json::parse(config_to_json(summary.config));
  // workers is an execution detail: identical seeds must give identical
  // summaries at any parallelism degree, so it stays out of this echo
  root["config"].erase("workers");
  root["moments"] = {
      {"mean_inv_v", summary.moments.m_v1},
      {"mean_inv_v_r", summary.moments.m_v1r},
      {"mean_inv_v_r2", summary.moments.m_v1r2},
      {"mean_inv_v_sq", summary.moments.m_v2},
      {"mean_inv_v_sq_r", summary.moments.m_v2r},
      {"mean_inv_v_sq_r2", summary.moments.m_v2r2},
      {"R1", summary.moments.r1},
      {"R2", summary.moments.r2},
      {"V1", summary.moments.v1},
      {"V2", summary.moments.v2}};
  root["n_failed_trials"] = summary.n_failed_trials;
  root["failures"] = summary.failure_messages;
  root["probes"] = {
      {"ee", summary_to_json_value(summary.probes.ee)},
      {"re", summary_to_json_value(summary.probes.re)},
      {"rr", summary_to_json_value(summary.probes.rr)},
      {"ee_limit", summary.probes.ee_limit},
      {"re_limit", summary.probes.re_limit},
      {"rr_limit", summary.probes.rr_limit}};
  json rows = json::array();
  for (const RRowStats& row : summary.rows) {
    json node;
    node["R"] = row.r;
    node["n_ok"] = row.n_ok;
    node["epsilon"] = summary_to_json_value(row.epsilon);
    node["q_w"] = summary_to_json_value(row.q_w);
    node["sharpe"] = summary_to_json_value(row.sharpe);
    node["epsilon_or"] = summary_to_json_value(row.epsilon_or);
    node["expected_epsilon_or"] =
        summary_to_json_value(row.expected_epsilon_or);
    node["epsilon_prime"] = summary_to_json_value(row.epsilon_prime);
    node["kappa_hat"] = std::isnan(row.kappa_hat) ? json() : json(row.kappa_hat);
    node["kappa_prime_hat"] =
        std::isnan(row.kappa_prime_hat) ? json() : json(row.kappa_prime_hat);
    node["kappa_hat_ratio_mean"] = std::isnan(row.kappa_hat_ratio_mean)
                                       ? json()
                                       : json(row.kappa_hat_ratio_mean);
    node["kappa_prime_hat_ratio_mean"] =
        std::isnan(row.kappa_prime_hat_ratio_mean)
            ? json()
            : json(row.kappa_prime_hat_ratio_mean);
    node["n_or_violations"] = row.n_or_violations;
    const replica::ReplicaPrediction& p = row.prediction;
    node["prediction"] = {
        {"epsilon", std::isnan(p.epsilon) ? json() : json(p.epsilon)},
        {"q_w", std::isnan(p.q_w) ? json() : json(p.q_w)},
        {"sharpe", std::isnan(p.sharpe) ? json() : json(p.sharpe)},
        {"q_s", std::isnan(p.q_s) ? json() : json(p.q_s)},
        {"epsilon_or", std::isnan(p.epsilon_or) ? json() : json(p.epsilon_or)},
        {"q_w_or", std::isnan(p.q_w_or) ? json() : json(p.q_w_or)},
        {"epsilon_prime",
         std::isnan(p.epsilon_prime) ? json() : json(p.epsilon_prime)},
        {"kappa", p.kappa},
        {"kappa_prime", p.kappa_prime}};
    rows.push_back(node);
  }
  root["rows"] = rows;
  return root.dump(2) + "\n";
}

std::string summary_svg(const ExperimentSummary& summary) {
  const double alpha = summary.config.alpha();
  double lo = 1e300, hi = -1e300;
  for (const RRowStats& row : summary.rows) {
    lo = std::min(lo, row.r);
    hi = std::max(hi, row.r);
  }
  if (lo > hi) {
    lo = 0;
    hi = 1;
  }

  PanelSeries eps, qw, sharpe;
  eps.title = "minimal risk per asset";
  qw.title = "concentration";
  sharpe.title = "Sharpe ratio";
  const int n_fine = 201;
  for (int i = 0; i < n_fine; ++i) {
    const double r = lo + (hi - lo) * i / (n_fine - 1);
    double pe = std::numeric_limits<double>::quiet_NaN();
    double pq = pe, ps = pe;
    try {
      pe = replica::min_risk(summary.moments, alpha, r);
      pq = replica::concentration(summary.moments, alpha, r);
      ps = replica::sharpe_ratio(summary.moments, alpha, r);
    } catch (const std::exception&) {
    }
    eps.pred_x.push_back(r);
    eps.pred_y.push_back(pe);
    qw.pred_x.push_back(r);
    qw.pred_y.push_back(pq);
    sharpe.pred_x.push_back(r);
    sharpe.pred_y.push_back(ps);
  }
  for (const RRowStats& row : summary.rows) {
    eps.x.push_back(row.r);
    eps.y.push_back(row.epsilon.mean);
    eps.se.push_back(row.epsilon.se);
    qw.x.push_back(row.r);
    qw.y.push_back(row.q_w.mean);
    qw.se.push_back(row.q_w.se);
    sharpe.x.push_back(row.r);
    sharpe.y.push_back(row.sharpe.mean);
    sharpe.se.push_back(row.sharpe.se);
  }
  try {
    eps.dashed_level = replica::min_risk_budget_only(summary.moments, alpha);
    qw.dashed_level =
        replica::concentration_budget_only(summary.moments, alpha);
    sharpe.dashed_level =
        replica::max_sharpe(summary.moments, alpha).s_at_rstar;
  } catch (const std::exception&) {
  }

  std::string body;
  body += render_panel(eps, 0);
  body += render_panel(qw, 400);
  body += render_panel(sharpe, 800);
  std::string out =
      "<svg xmlns='http://www.w3.org/2000/svg' width='1200' height='330' "
      "viewBox='0 0 1200 330'>\n<rect width='1200' height='330' "
      "fill='white'/>\n";
  out += body;
  out +=
      "<text x='600' y='322' text-anchor='middle' font-size='11' "
      "fill='#555'>lines: predictions; points: trial means, error bars "
      "&#177;1 SE</text>\n";
  out += "</svg>\n";
  return out;
}

std::string fnv1a64_hex(std::string_view content) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : content) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buffer[20];
  std::snprintf(buffer, sizeof buffer, "%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

RunManifest::RunManifest(std::string command, std::string config_echo_json,
                         std::uint64_t seed)
    : command_(std::move(command)),
      config_echo_json_(std::move(config_echo_json)),
      seed_(seed) {}

void RunManifest::write_file(const std::string& dir, const std::string& name,
                             std::string_view content) {
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("short write: " + path);
  entries_.push_back({name, content.size(), fnv1a64_hex(content)});
}

void RunManifest::add_warning(std::string message) {
  warnings_.push_back(std::move(message));
}

void RunManifest::write(const std::string& dir) const {
  json root;
  root["artifact"] = {{"name", "minrisk"}, {"version", "0.1.0"}};
  root["command"] = command_;
  root["seed"] = seed_;
  root["wall_ms"] = wall_ms_;
  root["config"] = json::parse(config_echo_json_);
  root["warnings"] = warnings_;
  json files = json::array();
  for (const Entry& entry : entries_)
    files.push_back({{"path", entry.path},
                     {"bytes", entry.bytes},
                     {"fnv1a64", entry.checksum}});
  root["outputs"] = files;
  std::filesystem::create_directories(dir);
  std::ofstream out(dir + "/manifest.json", std::ios::binary);
  const std::string text = root.dump(2) + "\n";
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

}  // namespace minrisk
