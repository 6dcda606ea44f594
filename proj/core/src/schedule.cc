#include "nvdd/schedule.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "nvdd/errors.h"
#include "nvdd/units.h"

namespace nvdd {
namespace {

using units::Dimension;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

const char* channel_name(Channel c) { return c == Channel::MW ? "mw" : "rf"; }

const char* ideal_name(IdealMode m) {
  switch (m) {
    case IdealMode::Selective:
      return "selective";
    case IdealMode::Hard:
      return "hard";
    case IdealMode::None:
      break;
  }
  return "none";
}

std::string level_text(LevelIndex l) { return std::to_string(l.ms) + "," + std::to_string(l.mi); }

class LineParser {
 public:
  LineParser(int line, std::vector<std::string_view> tokens) : line_(line) {
    for (size_t k = 1; k < tokens.size(); ++k) {
      const auto eq = tokens[k].find('=');
      if (eq == std::string_view::npos || eq == 0) {
        fail("expected key=value, got '" + std::string(tokens[k]) + "'");
      }
      std::string key(tokens[k].substr(0, eq));
      if (!kv_.emplace(key, tokens[k].substr(eq + 1)).second) fail("duplicate key '" + key + "'");
    }
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, msg); }

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string_view take(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) fail("missing key '" + key + "'");
    used_.push_back(key);
    return it->second;
  }

  double quantity(const std::string& key, Dimension dim) {
    const std::string_view raw = take(key);
    auto v = units::parse_quantity(raw, dim);
    if (!v) fail("bad value or unit for '" + key + "': '" + std::string(raw) + "'");
    return *v;
  }

  LevelIndex level(std::string_view text) const {
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) fail("level must be 'm_s,m_i'");
    auto ms = units::parse_double(text.substr(0, comma));
    auto mi = units::parse_double(text.substr(comma + 1));
    auto ok = [](const std::optional<double>& v) {
      return v && (*v == -1.0 || *v == 0.0 || *v == 1.0);
    };
    if (!ok(ms) || !ok(mi)) fail("level quantum numbers must be -1, 0 or 1");
    return {static_cast<int>(*ms), static_cast<int>(*mi)};
  }

  LevelPair pair(const std::string& key) {
    const std::string_view raw = take(key);
    const auto colon = raw.find(':');
    if (colon == std::string_view::npos) fail("target must be 'm_s,m_i:m_s,m_i'");
    return {level(raw.substr(0, colon)), level(raw.substr(colon + 1))};
  }

  // Rejects any key that was not consumed.
  void finish() const {
    for (const auto& [key, value] : kv_) {
      bool seen = false;
      for (const auto& u : used_) seen = seen || u == key;
      if (!seen) fail("unknown key '" + key + "'");
    }
  }

 private:
  int line_;
  std::map<std::string, std::string_view> kv_;
  std::vector<std::string> used_;
};

PulseEvent parse_pulse(LineParser& lp, Channel channel, System system) {
  PulseEvent p;
  p.channel = channel;
  p.freq = lp.quantity("freq", Dimension::Frequency);
  if (!(p.freq > 0)) lp.fail("freq must be > 0");
  p.phase = lp.has("phase") ? lp.quantity("phase", Dimension::Angle) : 0.0;
  p.target = lp.has("target")
                 ? lp.pair("target")
                 : (channel == Channel::MW ? mw_pair(0) : nuclear_pair(system, NuclearTransition::Nu1));
  if (lp.has("ideal")) {
    const std::string_view mode = lp.take("ideal");
    if (mode == "selective") {
      p.ideal = IdealMode::Selective;
    } else if (mode == "hard") {
      p.ideal = IdealMode::Hard;
    } else if (mode != "none") {
      lp.fail("ideal must be none, selective or hard");
    }
  }
  const bool has_dur = lp.has("dur");
  const bool has_flip = lp.has("flip");
  if (has_dur && has_flip) lp.fail("give either dur or flip, not both");
  if (p.ideal != IdealMode::None) {
    if (has_dur) lp.fail("ideal pulses take flip, not dur");
    if (!has_flip) lp.fail("ideal pulse needs flip");
    if (lp.has("rabi")) lp.fail("ideal pulses take no rabi");
    p.flip = lp.quantity("flip", Dimension::Angle);
  } else {
    p.rabi = lp.quantity("rabi", Dimension::Frequency);
    if (!(p.rabi > 0)) lp.fail("rabi must be > 0");
    if (!has_dur && !has_flip) lp.fail("pulse needs dur or flip");
    if (has_dur) {
      p.duration = lp.quantity("dur", Dimension::Time);
      if (p.duration < 0) lp.fail("negative duration");
    } else {
      const double flip = lp.quantity("flip", Dimension::Angle);
      if (flip < 0) lp.fail("negative flip angle (use phase + 180deg)");
      p.duration = flip / (360.0 * p.rabi);
    }
    p.flip = 360.0 * p.rabi * p.duration;
  }
  lp.finish();
  try {
    drive_operator(channel, p.target);
  } catch (const std::invalid_argument& e) {
    lp.fail(e.what());
  }
  return p;
}

}  // namespace

PulseEvent make_pulse(Channel channel, double freq, double rabi, double flip_deg, double phase_deg,
                      const LevelPair& target) {
  PulseEvent p;
  p.channel = channel;
  p.freq = freq;
  p.rabi = rabi;
  p.duration = flip_deg / (360.0 * rabi);
  p.flip = 360.0 * rabi * p.duration;
  p.phase = phase_deg;
  p.target = target;
  return p;
}

PulseEvent make_ideal_pulse(Channel channel, double freq, double flip_deg, double phase_deg,
                            const LevelPair& target, IdealMode mode) {
  PulseEvent p;
  p.channel = channel;
  p.freq = freq;
  p.flip = flip_deg;
  p.phase = phase_deg;
  p.target = target;
  p.ideal = mode;
  return p;
}

double event_duration(const Event& event) {
  if (const auto* p = std::get_if<PulseEvent>(&event)) return p->duration;
  if (const auto* d = std::get_if<Delay>(&event)) return d->duration;
  return 0.0;
}

double total_duration(const Schedule& schedule) {
  double t = 0;
  for (const Event& e : schedule.events) t += event_duration(e);
  return t;
}

void validate(const Schedule& schedule) {
  for (size_t k = 0; k < schedule.events.size(); ++k) {
    const Event& e = schedule.events[k];
    if (std::holds_alternative<LaserInit>(e) && k != 0) {
      throw ConfigError("laser initialization must be the first event");
    }
    if (const auto* p = std::get_if<PulseEvent>(&e)) {
      if (!(p->freq > 0)) throw ConfigError("pulse frequency must be > 0");
      if (p->duration < 0) throw ConfigError("negative pulse duration");
      if (p->ideal == IdealMode::None && !(p->rabi > 0)) throw ConfigError("pulse Rabi must be > 0");
      if (p->ideal != IdealMode::None && p->duration != 0) {
        throw ConfigError("ideal pulses have zero duration");
      }
      drive_operator(p->channel, p->target);
    }
    if (const auto* d = std::get_if<Delay>(&e); d && d->duration < 0) {
      throw ConfigError("negative delay");
    }
    if (const auto* m = std::get_if<Measure>(&e)) {
      const auto bad = [](char ch) { return std::isspace(static_cast<unsigned char>(ch)) || ch == '#' || ch == ','; };
      if (m->label.empty() || std::any_of(m->label.begin(), m->label.end(), bad)) {
        throw ConfigError("measure label must be a non-empty word");
      }
    }
  }
}

Schedule parse_schedule(std::string_view text) {
  Schedule s;
  bool in_header = true;
  bool seen_system = false;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const auto hash = raw.find('#');
    const std::string_view body = trim(raw.substr(0, hash));
    if (body.empty()) {
      if (in_header && hash != std::string_view::npos) {
        std::string_view c = raw.substr(hash + 1);
        if (!c.empty() && c.front() == ' ') c.remove_prefix(1);
        if (!s.comment.empty()) s.comment += '\n';
        s.comment += std::string(trim(c));
      }
      continue;
    }
    in_header = false;

    auto tokens = split_ws(body);
    const std::string_view kw = tokens.front();
    if (kw == "system") {
      if (tokens.size() != 2 || (tokens[1] != "a" && tokens[1] != "b")) {
        throw ParseError(line_no, "expected 'system a' or 'system b'");
      }
      if (seen_system || !s.events.empty()) {
        throw ParseError(line_no, "system must appear once, before any event");
      }
      seen_system = true;
      s.system = tokens[1] == "a" ? System::A : System::B;
      continue;
    }

    LineParser lp(line_no, tokens);
    if (kw == "mw" || kw == "rf") {
      s.events.emplace_back(parse_pulse(lp, kw == "mw" ? Channel::MW : Channel::RF, s.system));
    } else if (kw == "delay") {
      Delay d{lp.quantity("dur", Dimension::Time)};
      if (d.duration < 0) lp.fail("negative duration");
      lp.finish();
      s.events.emplace_back(d);
    } else if (kw == "vz") {
      VirtualZ v;
      const std::string_view ch = lp.take("channel");
      if (ch != "mw" && ch != "rf") lp.fail("channel must be mw or rf");
      v.channel = ch == "mw" ? Channel::MW : Channel::RF;
      v.angle = lp.quantity("angle", Dimension::Angle);
      lp.finish();
      s.events.emplace_back(v);
    } else if (kw == "laser") {
      lp.finish();
      if (!s.events.empty()) lp.fail("laser initialization must be the first event");
      s.events.emplace_back(LaserInit{});
    } else if (kw == "measure") {
      Measure m{std::string(lp.take("label"))};
      lp.finish();
      s.events.emplace_back(m);
    } else {
      throw ParseError(line_no, "unknown keyword '" + std::string(kw) + "'");
    }
  }
  return s;
}

std::string render_schedule(const Schedule& schedule) {
  using units::format_quantity;
  std::ostringstream out;
  if (!schedule.comment.empty()) {
    std::istringstream lines(schedule.comment);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
  }
  out << "system " << (schedule.system == System::A ? "a" : "b") << '\n';
  for (const Event& e : schedule.events) {
    if (const auto* p = std::get_if<PulseEvent>(&e)) {
      out << channel_name(p->channel) << " freq=" << format_quantity(p->freq, Dimension::Frequency);
      if (p->ideal == IdealMode::None) {
        out << " rabi=" << format_quantity(p->rabi, Dimension::Frequency)
            << " phase=" << format_quantity(p->phase, Dimension::Angle)
            << " dur=" << format_quantity(p->duration, Dimension::Time);
      } else {
        out << " phase=" << format_quantity(p->phase, Dimension::Angle)
            << " flip=" << format_quantity(p->flip, Dimension::Angle);
      }
      out << " target=" << level_text(p->target.p) << ':' << level_text(p->target.q);
      if (p->ideal != IdealMode::None) out << " ideal=" << ideal_name(p->ideal);
      out << '\n';
    } else if (const auto* d = std::get_if<Delay>(&e)) {
      out << "delay dur=" << format_quantity(d->duration, Dimension::Time) << '\n';
    } else if (const auto* v = std::get_if<VirtualZ>(&e)) {
      out << "vz channel=" << channel_name(v->channel)
          << " angle=" << format_quantity(v->angle, Dimension::Angle) << '\n';
    } else if (std::holds_alternative<LaserInit>(e)) {
      out << "laser\n";
    } else if (const auto* m = std::get_if<Measure>(&e)) {
      out << "measure label=" << m->label << '\n';
    }
  }
  return out.str();
}

}  // namespace nvdd
