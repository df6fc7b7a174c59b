#include "bellsim/report_io.hpp"

#include <cerrno>
#include <cstdio>
#include <fstream>
#include <system_error>

#include <json.hpp>

namespace bellsim {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::string report_to_json(const RunMetadata& meta, const EventCounts& counts,
                           const ChshReport& report) {
  nlohmann::json j;
  j["schema"] = "bellsim/chsh-report/1";
  j["source"] = meta.source_label;
  j["seed"] = meta.seed;
  j["n_per_pair"] = meta.n_per_pair;
  j["settings_rad"] = {{"alpha", meta.settings.alpha},
                       {"alpha_prime", meta.settings.alpha_prime},
                       {"beta", meta.settings.beta},
                       {"beta_prime", meta.settings.beta_prime}};

  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t k = 0; k < 4; ++k) {
    const SettingPair pair = kSettingPairs[k];
    const PairCounts& pc = counts[pair];
    pairs.push_back({{"pair", to_label(pair)},
                     {"counts",
                      {{"pp", pc.at(+1, +1)},
                       {"pm", pc.at(+1, -1)},
                       {"mp", pc.at(-1, +1)},
                       {"mm", pc.at(-1, -1)}}},
                     {"xi", report.xi[k].value},
                     {"se", report.se[k]}});
  }
  j["pairs"] = std::move(pairs);
  j["B"] = report.b();
  j["B_se"] = report.b_se();
  return j.dump(2) + "\n";
}

std::string counts_to_csv(const EventCounts& counts, const ChshReport& report) {
  std::string out = "pair,n_pp,n_pm,n_mp,n_mm,xi,se\n";
  for (std::size_t k = 0; k < 4; ++k) {
    const SettingPair pair = kSettingPairs[k];
    const PairCounts& pc = counts[pair];
    out += to_label(pair);
    out += ',' + std::to_string(pc.at(+1, +1));
    out += ',' + std::to_string(pc.at(+1, -1));
    out += ',' + std::to_string(pc.at(-1, +1));
    out += ',' + std::to_string(pc.at(-1, -1));
    out += ',' + fixed6(report.xi[k].value);
    out += ',' + fixed6(report.se[k]);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::system_error(errno ? errno : EIO, std::generic_category(),
                            "cannot open " + path.string() + " for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) {
    throw std::system_error(errno ? errno : EIO, std::generic_category(),
                            "cannot write " + path.string());
  }
}

}  // namespace bellsim
