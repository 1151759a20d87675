#include "hetsleep/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hetsleep {

using nlohmann::json;

double dbm_to_w(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double BsTier::tx_power_w() const { return dbm_to_w(tx_power_dbm); }

double UeTier::density() const {
  if (category == 3) return intensity;
  return mean_cluster_size * parent_intensity;
}

double Scenario::bs_density_total() const {
  double s = 0.0;
  for (const auto& t : bs_tiers) s += t.intensity;
  return s;
}

double Scenario::ue_density_total() const {
  double s = 0.0;
  for (const auto& t : ue_tiers) s += t.density();
  return s;
}

double Scenario::window_side() const {
  if (window.side_m > 0.0) return window.side_m;
  return std::max(2.0 * r_max, 20.0 / std::sqrt(bs_density_total()));
}

std::size_t Scenario::bs_index(int id) const {
  for (std::size_t i = 0; i < bs_tiers.size(); ++i)
    if (bs_tiers[i].id == id) return i;
  std::ostringstream msg;
  msg << "unknown BS tier " << id << "; valid tiers:";
  for (const auto& t : bs_tiers) msg << ' ' << t.id;
  throw ConfigError(msg.str());
}

std::size_t Scenario::ue_index(int id) const {
  for (std::size_t i = 0; i < ue_tiers.size(); ++i)
    if (ue_tiers[i].id == id) return i;
  std::ostringstream msg;
  msg << "unknown UE tier " << id << "; valid tiers:";
  for (const auto& t : ue_tiers) msg << ' ' << t.id;
  throw ConfigError(msg.str());
}

double Scenario::gain_a(std::size_t k) const {
  const auto& t = bs_tiers.at(k);
  return channel.beta * t.antennas * t.tx_power_w();
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

std::string at(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

}  // namespace

void Scenario::validate() const {
  require(!bs_tiers.empty(), "bs_tiers: at least one BS tier is required");
  require(!ue_tiers.empty(), "ue_tiers: at least one UE tier is required");
  std::set<int> ids;
  for (std::size_t i = 0; i < bs_tiers.size(); ++i) {
    const auto& t = bs_tiers[i];
    const auto p = at("bs_tiers", i);
    require(t.id >= 1, p + ".id: must be >= 1 (0 is reserved for the coupled BS)");
    require(ids.insert(t.id).second, p + ".id: duplicate tier id " + std::to_string(t.id));
    require(t.intensity > 0.0, p + ".intensity_per_m2: must be > 0");
    require(std::isfinite(t.tx_power_dbm), p + ".tx_power_dbm: must be finite");
    require(t.antennas >= 1, p + ".antennas: must be >= 1");
    require(t.p_sleep_w >= 0.0, p + ".p_sleep_w: must be >= 0");
    require(t.p_stat_w > t.p_sleep_w, p + ".p_stat_w: must exceed p_sleep_w");
  }
  ids.clear();
  for (std::size_t i = 0; i < ue_tiers.size(); ++i) {
    const auto& t = ue_tiers[i];
    const auto p = at("ue_tiers", i);
    require(ids.insert(t.id).second, p + ".id: duplicate tier id " + std::to_string(t.id));
    require(t.category >= 1 && t.category <= 3, p + ".category: must be 1, 2 or 3");
    if (t.category == 3) {
      require(t.intensity > 0.0, p + ".intensity_per_m2: must be > 0");
      continue;
    }
    require(t.mean_cluster_size > 0.0, p + ".mean_cluster_size: must be > 0");
    require(t.cluster_radius > 0.0, p + ".cluster_radius_m: must be > 0");
    if (t.category == 1) {
      require(t.parent_intensity > 0.0, p + ".parent_intensity_per_m2: must be > 0");
    } else {
      std::size_t k = 0;
      try {
        k = bs_index(t.coupled_bs_tier);
      } catch (const ConfigError& e) {
        throw ConfigError(p + ".coupled_bs_tier: " + e.what());
      }
      require(bs_tiers[k].kind == BsKind::hotspot,
              p + ".coupled_bs_tier: must name a hotspot BS tier");
      require(t.parent_intensity == bs_tiers[k].intensity,
              p + ".parent_intensity: must equal the coupled tier intensity");
      for (std::size_t o = 0; o < i; ++o)
        require(ue_tiers[o].category != 2 || ue_tiers[o].coupled_bs_tier != t.coupled_bs_tier,
                p + ".coupled_bs_tier: BS tier already coupled to another user tier");
    }
  }
  require(channel.alpha > 2.0, "alpha: must be > 2");
  require(channel.beta > 0.0, "beta: must be > 0");
  require(channel.m >= 1.0, "m_nakagami: must be >= 1");
  require(channel.noise_power >= 0.0, "noise_power: must be >= 0");
  require(channel.d_over_wavelength == 0.5, "d_over_wavelength: only 0.5 is supported");
  require(power.p_a_w >= 0.0, "p_a_w: must be >= 0");
  require(power.delta_p >= 0.0, "delta_p: must be >= 0");
  require(r_min > 0.0, "r_min_m: must be > 0");
  require(r_max > r_min, "r_max_m: must exceed r_min_m");
  require(std::isfinite(tau_db), "tau_db: must be finite");
  require(window.side_m >= 0.0, "window.side_m: must be >= 0");
  require(window.guard_margin_m >= 0.0, "window.guard_margin_m: must be >= 0");
  if (window.wrap == WrapMode::guard)
    require(window_side() >= 2.0 * r_max, "window.side_m: must be >= 2 r_max in guard mode");
  const int n = load.dft_size;
  require(n >= 16 && (n & (n - 1)) == 0, "load.dft_size: must be a power of two >= 16");
  require(load.quad_rel_tol > 0.0, "load.quad_rel_tol: must be > 0");
  require(load.radius_tail > 0.0 && load.radius_tail < 1e-3, "load.radius_tail: must be in (0, 1e-3)");
  require(load.chi_mode != ChiMode::fixed || load.chi_m >= 0.0, "load.chi_m: must be >= 0");
}

namespace {

// Walks one JSON object, remembering which keys were read so leftovers can
// be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <typename T>
  T get(const std::string& key) {
    if (!j_.contains(key)) throw ConfigError(where(key) + ": missing required field");
    return convert<T>(key);
  }

  template <typename T>
  T get_or(const std::string& key, T fallback) {
    if (!j_.contains(key)) return fallback;
    return convert<T>(key);
  }

  const json& child(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string where(const std::string& key = {}) const {
    if (key.empty()) return path_.empty() ? std::string("<root>") : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(where(it.key()) + ": unknown field");
  }

 private:
  template <typename T>
  T convert(const std::string& key) {
    seen_.insert(key);
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, int>) {
        if (!v.is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
      } else if constexpr (std::is_arithmetic_v<T> && !std::is_same_v<T, bool>) {
        if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
      }
      return v.get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(where(key) + ": " + e.what());
    }
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename E>
E parse_enum(const std::string& value, const std::string& where,
             std::initializer_list<std::pair<const char*, E>> table) {
  std::string valid;
  for (const auto& [name, e] : table) {
    if (value == name) return e;
    valid += std::string(valid.empty() ? "" : ", ") + name;
  }
  throw ConfigError(where + ": unknown value '" + value + "' (expected one of " + valid + ")");
}

const char* name_of(BsKind k) { return k == BsKind::base ? "base" : "hotspot"; }
const char* name_of(WrapMode w) { return w == WrapMode::toroidal ? "toroidal" : "guard"; }
const char* name_of(Kernel k) { return k == Kernel::cosine ? "cosine" : "actual"; }
const char* name_of(ChiMode c) {
  switch (c) {
    case ChiMode::zero: return "zero";
    case ChiMode::two_rc: return "two_rc";
    default: return "fixed";
  }
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  Scenario s;
  ObjectReader root(j, "");
  const double p_stat = root.get_or("p_stat_w", 260.0);
  const double p_sleep = root.get_or("p_sleep_w", 75.0);
  s.power.p_a_w = root.get<double>("p_a_w");
  s.power.delta_p = root.get<double>("delta_p");
  s.r_min = root.get<double>("r_min_m");
  s.r_max = root.get<double>("r_max_m");
  s.tau_db = root.get_or("tau_db", 5.0);
  s.channel.m = root.get<double>("m_nakagami");
  s.channel.beta = root.get<double>("beta");
  s.channel.alpha = root.get<double>("alpha");
  s.channel.noise_power = root.get<double>("noise_power");
  s.channel.d_over_wavelength = root.get_or("d_over_wavelength", 0.5);
  s.channel.kernel = parse_enum<Kernel>(root.get_or<std::string>("kernel", "cosine"),
                                        root.where("kernel"),
                                        {{"cosine", Kernel::cosine}, {"actual", Kernel::actual}});

  const json& bs = root.child("bs_tiers");
  if (!bs.is_array()) throw ConfigError("bs_tiers: expected an array");
  for (std::size_t i = 0; i < bs.size(); ++i) {
    ObjectReader r(bs[i], at("bs_tiers", i));
    BsTier t;
    t.id = r.get<int>("id");
    t.kind = parse_enum<BsKind>(r.get_or<std::string>("kind", "base"), r.where("kind"),
                                {{"base", BsKind::base}, {"hotspot", BsKind::hotspot}});
    t.intensity = r.get<double>("intensity_per_m2");
    t.tx_power_dbm = r.get<double>("tx_power_dbm");
    t.antennas = r.get<int>("antennas");
    t.p_stat_w = r.get_or("p_stat_w", p_stat);
    t.p_sleep_w = r.get_or("p_sleep_w", p_sleep);
    r.finish();
    s.bs_tiers.push_back(t);
  }

  const json& ue = root.child("ue_tiers");
  if (!ue.is_array()) throw ConfigError("ue_tiers: expected an array");
  for (std::size_t i = 0; i < ue.size(); ++i) {
    ObjectReader r(ue[i], at("ue_tiers", i));
    UeTier t;
    t.id = r.get<int>("id");
    t.category = r.get<int>("category");
    if (t.category == 3) {
      t.intensity = r.get<double>("intensity_per_m2");
    } else if (t.category == 1 || t.category == 2) {
      t.mean_cluster_size = r.get<double>("mean_cluster_size");
      t.cluster_radius = r.get<double>("cluster_radius_m");
      if (t.category == 1) {
        t.parent_intensity = r.get<double>("parent_intensity_per_m2");
      } else {
        t.coupled_bs_tier = r.get<int>("coupled_bs_tier");
      }
    } else {
      throw ConfigError(r.where("category") + ": must be 1, 2 or 3");
    }
    r.finish();
    s.ue_tiers.push_back(t);
  }
  for (std::size_t i = 0; i < s.ue_tiers.size(); ++i) {
    auto& t = s.ue_tiers[i];
    if (t.category != 2) continue;
    try {
      t.parent_intensity = s.bs_tiers[s.bs_index(t.coupled_bs_tier)].intensity;
    } catch (const ConfigError& e) {
      throw ConfigError(at("ue_tiers", i) + ".coupled_bs_tier: " + e.what());
    }
  }

  if (root.has("window")) {
    ObjectReader r(root.child("window"), "window");
    s.window.side_m = r.get_or("side_m", 0.0);
    s.window.wrap = parse_enum<WrapMode>(r.get_or<std::string>("wrap", "toroidal"), r.where("wrap"),
                                         {{"toroidal", WrapMode::toroidal}, {"guard", WrapMode::guard}});
    s.window.guard_margin_m = r.get_or("guard_margin_m", 0.0);
    r.finish();
  }
  if (root.has("load")) {
    ObjectReader r(root.child("load"), "load");
    s.load.chi_mode = parse_enum<ChiMode>(
        r.get_or<std::string>("chi_mode", "two_rc"), r.where("chi_mode"),
        {{"zero", ChiMode::zero}, {"two_rc", ChiMode::two_rc}, {"fixed", ChiMode::fixed}});
    s.load.chi_m = r.get_or("chi_m", 0.0);
    s.load.dft_size = r.get_or("dft_size", 512);
    s.load.quad_rel_tol = r.get_or("quad_rel_tol", 1e-8);
    s.load.radius_tail = r.get_or("radius_tail", 1e-10);
    s.load.count_typical_in_load = r.get_or("count_typical_in_load", false);
    r.finish();
  }
  root.finish();
  s.validate();
  return s;
}

json scenario_to_json(const Scenario& s) {
  json j;
  if (!s.bs_tiers.empty()) {
    j["p_stat_w"] = s.bs_tiers.front().p_stat_w;
    j["p_sleep_w"] = s.bs_tiers.front().p_sleep_w;
  }
  j["p_a_w"] = s.power.p_a_w;
  j["delta_p"] = s.power.delta_p;
  j["r_min_m"] = s.r_min;
  j["r_max_m"] = s.r_max;
  j["tau_db"] = s.tau_db;
  j["m_nakagami"] = s.channel.m;
  j["beta"] = s.channel.beta;
  j["alpha"] = s.channel.alpha;
  j["noise_power"] = s.channel.noise_power;
  j["d_over_wavelength"] = s.channel.d_over_wavelength;
  j["kernel"] = name_of(s.channel.kernel);
  j["bs_tiers"] = json::array();
  for (const auto& t : s.bs_tiers) {
    j["bs_tiers"].push_back({{"id", t.id},
                             {"kind", name_of(t.kind)},
                             {"intensity_per_m2", t.intensity},
                             {"tx_power_dbm", t.tx_power_dbm},
                             {"antennas", t.antennas},
                             {"p_stat_w", t.p_stat_w},
                             {"p_sleep_w", t.p_sleep_w}});
  }
  j["ue_tiers"] = json::array();
  for (const auto& t : s.ue_tiers) {
    json u{{"id", t.id}, {"category", t.category}};
    if (t.category == 3) {
      u["intensity_per_m2"] = t.intensity;
    } else {
      u["mean_cluster_size"] = t.mean_cluster_size;
      u["cluster_radius_m"] = t.cluster_radius;
      if (t.category == 1)
        u["parent_intensity_per_m2"] = t.parent_intensity;
      else
        u["coupled_bs_tier"] = t.coupled_bs_tier;
    }
    j["ue_tiers"].push_back(u);
  }
  j["window"] = {{"side_m", s.window.side_m},
                 {"wrap", name_of(s.window.wrap)},
                 {"guard_margin_m", s.window.guard_margin_m}};
  j["load"] = {{"chi_mode", name_of(s.load.chi_mode)},
               {"chi_m", s.load.chi_m},
               {"dft_size", s.load.dft_size},
               {"quad_rel_tol", s.load.quad_rel_tol},
               {"radius_tail", s.load.radius_tail},
               {"count_typical_in_load", s.load.count_typical_in_load}};
  return j;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open scenario file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Scenario table2_scenario() {
  Scenario s;
  BsTier base;
  base.id = 1;
  base.kind = BsKind::base;
  base.intensity = 1e-4;
  BsTier hot;
  hot.id = 2;
  hot.kind = BsKind::hotspot;
  hot.intensity = 2.5e-5;
  s.bs_tiers = {base, hot};

  UeTier coupled;
  coupled.id = 2;
  coupled.category = 2;
  coupled.coupled_bs_tier = 2;
  coupled.parent_intensity = hot.intensity;
  coupled.mean_cluster_size = 40.0;
  coupled.cluster_radius = 20.0;
  UeTier clustered;
  clustered.id = 3;
  clustered.category = 1;
  clustered.parent_intensity = 1e-4;
  clustered.mean_cluster_size = 10.0;
  clustered.cluster_radius = 20.0;
  UeTier uniform;
  uniform.id = 4;
  uniform.category = 3;
  uniform.intensity = 1e-3;
  s.ue_tiers = {coupled, clustered, uniform};
  return s;
}

}  // namespace hetsleep
