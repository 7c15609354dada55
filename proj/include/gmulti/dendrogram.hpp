#pragma once

#include <algorithm>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gmulti/errors.hpp"
#include "gmulti/prune.hpp"

namespace gmulti {

// Node of a change-point dendrogram. Leaves are the final segments; each
// internal node replays one elimination (merging the two clusters adjacent to
// the removed point) at height −ep-BIC of the model after the removal, lifted
// so heights never decrease toward the root.
struct DendroNode {
  double height = 0.0;
  long removed_point = 0;  // internal nodes only
  long seg_lo = 0, seg_hi = 0;  // observation span covered by this cluster
  int left = -1, right = -1;

  bool leaf() const { return left < 0; }
};

struct Dendrogram {
  std::vector<DendroNode> nodes;
  int root = -1;
  long n = 0;

  std::size_t leaf_count() const {
    std::size_t c = 0;
    for (const auto& nd : nodes) c += nd.leaf() ? 1 : 0;
    return c;
  }
  std::size_t internal_count() const { return nodes.size() - leaf_count(); }
};

// Replays the elimination trace from the selected model upward: leaves are the
// m̂+1 segments of τ̂ at height −ep-BIC(τ̂); the elimination of each remaining
// point merges the two clusters meeting at it.
inline Dendrogram build_dendrogram(const EliminationTrace& trace, long n) {
  Dendrogram d;
  d.n = n;
  const std::size_t m_hat = trace.chosen_m;
  const std::vector<long>& tau = trace.steps[m_hat].points;
  const double leaf_height = -trace.steps[m_hat].ep_bic;

  std::vector<int> active;  // cluster node ids, left to right
  long lo = 1;
  for (std::size_t j = 0; j <= tau.size(); ++j) {
    const long hi = j < tau.size() ? tau[j] : n;
    d.nodes.push_back({leaf_height, 0, lo, hi, -1, -1});
    active.push_back(static_cast<int>(d.nodes.size()) - 1);
    lo = hi + 1;
  }
  for (std::size_t l = m_hat; l >= 1; --l) {
    const long removed = trace.steps[l].removed;
    std::size_t i = 0;
    while (i < active.size() && d.nodes[static_cast<std::size_t>(active[i])].seg_hi != removed) ++i;
    if (i + 1 >= active.size())
      throw Error("elimination trace inconsistent with dendrogram clusters");
    const DendroNode& a = d.nodes[static_cast<std::size_t>(active[i])];
    const DendroNode& b = d.nodes[static_cast<std::size_t>(active[i + 1])];
    const double h =
        std::max({-trace.steps[l - 1].ep_bic, a.height, b.height});
    d.nodes.push_back({h, removed, a.seg_lo, b.seg_hi, active[i], active[i + 1]});
    active[i] = static_cast<int>(d.nodes.size()) - 1;
    active.erase(active.begin() + static_cast<long>(i) + 1);
  }
  d.root = active.front();
  return d;
}

namespace detail {

inline nlohmann::json dendro_node_json(const Dendrogram& d, int id) {
  const DendroNode& nd = d.nodes[static_cast<std::size_t>(id)];
  nlohmann::json j;
  j["height"] = nd.height;
  if (nd.leaf()) {
    j["segment"] = {nd.seg_lo, nd.seg_hi};
  } else {
    j["removed_point"] = nd.removed_point;
    j["children"] = {dendro_node_json(d, nd.left), dendro_node_json(d, nd.right)};
  }
  return j;
}

inline int dendro_node_from_json(const nlohmann::json& j, Dendrogram& d) {
  DendroNode nd;
  nd.height = j.at("height").get<double>();
  if (j.contains("children")) {
    nd.removed_point = j.at("removed_point").get<long>();
    nd.left = dendro_node_from_json(j.at("children").at(0), d);
    nd.right = dendro_node_from_json(j.at("children").at(1), d);
    nd.seg_lo = d.nodes[static_cast<std::size_t>(nd.left)].seg_lo;
    nd.seg_hi = d.nodes[static_cast<std::size_t>(nd.right)].seg_hi;
  } else {
    nd.seg_lo = j.at("segment").at(0).get<long>();
    nd.seg_hi = j.at("segment").at(1).get<long>();
  }
  d.nodes.push_back(nd);
  return static_cast<int>(d.nodes.size()) - 1;
}

}  // namespace detail

inline nlohmann::json dendrogram_to_json(const Dendrogram& d) {
  nlohmann::json j;
  j["n"] = d.n;
  j["tree"] = detail::dendro_node_json(d, d.root);
  return j;
}

inline Dendrogram dendrogram_from_json(const nlohmann::json& j) {
  Dendrogram d;
  d.n = j.at("n").get<long>();
  d.root = detail::dendro_node_from_json(j.at("tree"), d);
  return d;
}

// Standalone SVG rendering: leaves on the x-axis at their segment midpoints,
// merge heights on the y-axis, classic bracket layout.
inline std::string dendrogram_to_svg(const Dendrogram& d) {
  const double width = 900, height = 520;
  const double ml = 70, mr = 30, mt = 40, mb = 70;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double hmin = d.nodes.front().height, hmax = hmin;
  for (const auto& nd : d.nodes) {
    hmin = std::min(hmin, nd.height);
    hmax = std::max(hmax, nd.height);
  }
  const double span = std::max(hmax - hmin, 1e-9);
  const auto xpos = [&](double obs) { return ml + (obs - 0.5) / static_cast<double>(d.n) * pw; };
  const auto ypos = [&](double h) { return mt + (hmax - h) / span * ph; };

  std::string svg;
  char buf[512];
  const auto add = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof buf, fmt, args...);
    svg += buf;
  };
  add("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
      "viewBox=\"0 0 %.0f %.0f\">\n",
      width, height, width, height);
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  add("<text x=\"%.1f\" y=\"%.1f\" font-size=\"15\" font-family=\"sans-serif\">"
      "change-point dendrogram</text>\n",
      ml, mt - 16.0);

  // y-axis with ticks on the -ep-BIC scale
  add("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
      ml - 10.0, mt, ml - 10.0, mt + ph);
  for (int i = 0; i <= 4; ++i) {
    const double h = hmin + span * i / 4.0;
    const double y = ypos(h);
    add("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
        ml - 14.0, y, ml - 10.0, y);
    add("<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" font-family=\"sans-serif\" "
        "text-anchor=\"end\">%.1f</text>\n",
        ml - 18.0, y + 4.0, h);
  }

  // post-order x placement: leaf = segment midpoint, internal = child mean
  std::vector<double> x(d.nodes.size(), 0.0);
  const std::function<void(int)> place = [&](int id) {
    const DendroNode& nd = d.nodes[static_cast<std::size_t>(id)];
    if (nd.leaf()) {
      x[static_cast<std::size_t>(id)] =
          xpos(0.5 * (static_cast<double>(nd.seg_lo) + static_cast<double>(nd.seg_hi)));
      return;
    }
    place(nd.left);
    place(nd.right);
    x[static_cast<std::size_t>(id)] =
        0.5 * (x[static_cast<std::size_t>(nd.left)] + x[static_cast<std::size_t>(nd.right)]);
  };
  place(d.root);

  const std::function<void(int)> draw = [&](int id) {
    const DendroNode& nd = d.nodes[static_cast<std::size_t>(id)];
    const double xi = x[static_cast<std::size_t>(id)];
    if (nd.leaf()) {
      const double y = ypos(nd.height);
      add("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
          xi, y, xi, y + 8.0);
      add("<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" font-family=\"sans-serif\" "
          "text-anchor=\"middle\">%ld\xE2\x80\x93%ld</text>\n",
          xi, y + 22.0, nd.seg_lo, nd.seg_hi);
      return;
    }
    const double y = ypos(nd.height);
    const double xl = x[static_cast<std::size_t>(nd.left)];
    const double xr = x[static_cast<std::size_t>(nd.right)];
    const double yl = ypos(d.nodes[static_cast<std::size_t>(nd.left)].height);
    const double yr = ypos(d.nodes[static_cast<std::size_t>(nd.right)].height);
    add("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
        xl, yl, xl, y);
    add("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
        xr, yr, xr, y);
    add("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n",
        xl, y, xr, y);
    add("<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" font-family=\"sans-serif\" "
        "fill=\"#555\" text-anchor=\"middle\">%ld</text>\n",
        0.5 * (xl + xr), y - 5.0, nd.removed_point);
    draw(nd.left);
    draw(nd.right);
  };
  draw(d.root);
  svg += "</svg>\n";
  return svg;
}

}  // namespace gmulti
