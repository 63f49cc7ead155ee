#include <openssl/evp.h>

#include <cmath>
#include <cstdio>

#include "dcflex/harness.hpp"

namespace dcflex {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", std::abs(v) < 1e-9 ? 0.0 : v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : ""; }
std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

std::string sweep_csv_header(const Network& network) {
  std::string h =
      "variant,line_factor,window_h,geo_portion,growth_ratio,budget_scale,status,requires_shed,"
      "total_cost,investment_cost,operating_cost,delay_cost,shift_cost,shed_cost,added_capacity_mw,"
      "total_shift_mw,max_backlog_mw,binding_line_hours";
  for (const auto& g : network.generators) h += ",added_mw_" + g.id;
  return h + ",error\n";
}

std::string sweep_csv_row(const SweepRecord& r, std::size_t generators) {
  std::string s;
  s += std::string(to_string(r.variant)) + "," + num(r.line_factor) + "," + opt(r.window_h) + "," +
       opt(r.geo_portion) + "," + opt(r.growth_ratio) + "," + num(r.budget_scale) + "," + r.status + ",";
  if (r.optimal()) {
    s += std::string(r.requires_shed ? "1" : "0");
    for (double v : {r.total_cost, r.investment_cost, r.operating_cost, r.delay_cost, r.shift_cost, r.shed_cost,
                     r.added_capacity_mw, r.total_shift_mw, r.max_backlog_mw})
      s += "," + num(v);
    s += "," + std::to_string(r.binding_line_hours);
    for (double v : r.added_by_generator) s += "," + num(v);
  } else {
    s += std::string(10 + generators, ',');
  }
  return s + "," + quoted(r.error) + "\n";
}

std::string sweep_csv(const std::vector<SweepRecord>& records, const Network& network) {
  std::string out = sweep_csv_header(network);
  for (const auto& r : records) out += sweep_csv_row(r, network.generator_count());
  return out;
}

std::string sha256_file(const std::string& path) {
  const auto data = read_text_file(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed for " + path);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

json make_manifest(const std::string& command, const json& resolved_config,
                   const std::map<std::string, std::string>& fixtures) {
  json files = json::object();
  for (const auto& [role, path] : fixtures) files[role] = {{"path", path}, {"sha256", sha256_file(path)}};
  return json{{"tool", "dcflex"}, {"version", kToolVersion}, {"command", command},
              {"config", resolved_config}, {"fixtures", files}};
}

}  // namespace dcflex
