#include "nvdd/schedule.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "nvdd/errors.h"

namespace nvdd {
namespace {

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::filesystem::path> fixtures() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(NVDD_FIXTURES)) {
    if (e.path().extension() == ".sched") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Parse, RfPulseWithUnits) {
  const Schedule s = parse_schedule("rf freq=2.8161MHz rabi=5.84kHz phase=0deg dur=67.15us\n");
  ASSERT_EQ(s.events.size(), 1u);
  const auto& p = std::get<PulseEvent>(s.events[0]);
  EXPECT_EQ(p.channel, Channel::RF);
  EXPECT_DOUBLE_EQ(p.freq, 2.8161e6);
  EXPECT_DOUBLE_EQ(p.duration, 6.715e-5);
  EXPECT_NEAR(p.flip, 360.0 * 5840.0 * 6.715e-5, 1e-12 * p.flip);
}

TEST(Parse, FlipConvertsToDuration) {
  const Schedule s = parse_schedule("mw freq=2626.4MHz rabi=0.28MHz flip=90deg phase=0deg");
  const auto& p = std::get<PulseEvent>(s.events[0]);
  EXPECT_NEAR(p.duration, 90.0 / (360.0 * 2.8e5), 1e-18);
  EXPECT_NEAR(p.duration, 8.9286e-7, 1e-10);
  EXPECT_EQ(p.target, mw_pair(0));
}

TEST(Parse, DefaultRfTargetFollowsSystem) {
  const Schedule s = parse_schedule("system b\nrf freq=4.9239MHz rabi=9kHz dur=1us\n");
  EXPECT_EQ(std::get<PulseEvent>(s.events[0]).target, nuclear_pair(System::B, NuclearTransition::Nu1));
}

TEST(Parse, ErrorsCarryLineNumbers) {
  struct Case {
    const char* text;
    int line;
  };
  const Case cases[] = {
      {"laser\nrf freq=1MHz rabi=1kHz dur=-1us\n", 2},
      {"rf freq=1MHz rabi=1kHz dur=1us flip=90deg\n", 1},
      {"# c\n\nwiggle dur=1us\n", 3},
      {"delay dur=1us colour=red\n", 1},
      {"delay dur=1us dur=2us\n", 1},
      {"delay dur=1MHz\n", 1},
      {"mw freq=1GHz rabi=1MHz flip=-90deg\n", 1},
      {"mw freq=1GHz flip=90deg ideal=hard rabi=1MHz\n", 1},
      {"rf freq=1MHz rabi=1kHz dur=1us target=0,0:-1,0\n", 1},
      {"delay dur=1us\nsystem a\n", 2},
      {"measure\n", 1},
      {"vz channel=xx angle=10deg\n", 1},
  };
  for (const Case& c : cases) {
    try {
      parse_schedule(c.text);
      ADD_FAILURE() << "accepted: " << c.text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), c.line) << c.text << " -> " << e.what();
    }
  }
}

TEST(Parse, LaserMustBeFirst) {
  EXPECT_THROW(parse_schedule("delay dur=1us\nlaser\n"), ConfigError);
  EXPECT_THROW(parse_schedule("laser\nlaser\n"), ConfigError);
}

TEST(Validate, MeasureLabels) {
  Schedule s;
  s.events.emplace_back(Measure{"p0"});
  EXPECT_NO_THROW(validate(s));
  for (const char* bad : {"", "a b", "x,y"}) {
    s.events[0] = Measure{bad};
    EXPECT_THROW(validate(s), ConfigError) << bad;
  }
}

TEST(Render, FormatDetails) {
  Schedule s;
  s.events = {LaserInit{}, make_pulse(Channel::MW, 2.6264e9, 2.8e5, 90, 0, mw_pair(0)),
              VirtualZ{Channel::MW, 180.0},
              make_pulse(Channel::MW, 2.6264e9, 2.8e5, 90, 180, mw_pair(0))};
  const std::string text = render_schedule(s);
  EXPECT_NE(text.find("vz channel=mw angle=180deg\n"), std::string::npos);
  int lines = 0;
  for (char c : text) lines += c == '\n';
  EXPECT_EQ(lines, 5);  // system line + 4 events
  EXPECT_EQ(parse_schedule(text), s);
}

TEST(Golden, RoundTripIsByteIdentical) {
  const auto files = fixtures();
  ASSERT_GE(files.size(), 5u);
  for (const auto& f : files) {
    const std::string text = read(f);
    const Schedule s = parse_schedule(text);
    const std::string once = render_schedule(s);
    if (f.filename() != "handwritten.sched") {
      EXPECT_EQ(once, text) << f;
    }
    EXPECT_EQ(render_schedule(parse_schedule(once)), once) << f;
    EXPECT_EQ(parse_schedule(once), s) << f;
  }
}

TEST(Golden, MutatedKeywordsAreRejected) {
  std::mt19937_64 rng(11);
  for (const auto& f : fixtures()) {
    std::vector<std::string> lines;
    std::istringstream in(read(f));
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    for (size_t k = 0; k < lines.size(); ++k) {
      const std::string& l = lines[k];
      if (l.empty() || l[0] == '#') continue;
      std::string mutated = l;
      std::uniform_int_distribution<size_t> pos(0, l.find_first_of(" \t") == std::string::npos
                                                       ? l.size() - 1
                                                       : l.find_first_of(" \t") - 1);
      mutated[pos(rng)] = 'Q';
      std::string text;
      for (size_t j = 0; j < lines.size(); ++j) text += (j == k ? mutated : lines[j]) + "\n";
      try {
        parse_schedule(text);
        ADD_FAILURE() << "accepted mutated keyword: " << mutated;
      } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), static_cast<int>(k) + 1);
      }
    }
  }
}

Schedule random_schedule(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> kind(0, 5);
  Schedule s;
  s.system = u(rng) < 0.5 ? System::A : System::B;
  if (u(rng) < 0.5) s.comment = "random schedule\nline two";
  if (u(rng) < 0.5) s.events.emplace_back(LaserInit{});
  const int n = std::uniform_int_distribution<int>(0, 12)(rng);
  for (int k = 0; k < n; ++k) {
    const double freq = std::exp(u(rng) * 25.0);
    const double phase = (u(rng) - 0.5) * 720.0;
    switch (kind(rng)) {
      case 0:
        s.events.emplace_back(make_pulse(Channel::MW, freq, 1e3 + 1e7 * u(rng), 360 * u(rng), phase, mw_pair(1 - k % 3)));
        break;
      case 1: {
        PulseEvent p = make_pulse(Channel::RF, freq, 1e3 + 1e4 * u(rng), 0, phase,
                                  nuclear_pair(s.system, k % 2 ? NuclearTransition::Nu1 : NuclearTransition::Nu2));
        p.duration = u(rng) * 1e-3;
        p.flip = 360.0 * p.rabi * p.duration;
        s.events.emplace_back(p);
        break;
      }
      case 2:
        s.events.emplace_back(make_ideal_pulse(Channel::MW, freq, 720 * u(rng), phase, mw_pair(0),
                                               u(rng) < 0.5 ? IdealMode::Hard : IdealMode::Selective));
        break;
      case 3:
        s.events.emplace_back(Delay{u(rng) * 1e-4});
        break;
      case 4:
        s.events.emplace_back(VirtualZ{u(rng) < 0.5 ? Channel::MW : Channel::RF, phase});
        break;
      default:
        s.events.emplace_back(Measure{"m" + std::to_string(k)});
    }
  }
  return s;
}

TEST(Property, RandomScheduleRoundTrip) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const Schedule s = random_schedule(rng);
    const std::string text = render_schedule(s);
    const Schedule back = parse_schedule(text);
    ASSERT_EQ(back, s) << text;
    EXPECT_EQ(render_schedule(back), text);
  }
}

TEST(Property, FlipDurationIdentity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double rabi = 1e3 + 1e7 * u(rng), flip = 720 * u(rng);
    const PulseEvent p = make_pulse(Channel::MW, 1e9, rabi, flip, 0, mw_pair(0));
    EXPECT_NEAR(p.flip, 360.0 * p.rabi * p.duration, 1e-12 * std::max(1.0, p.flip));
    EXPECT_NEAR(p.flip, flip, 1e-12 * std::max(1.0, flip));
  }
}

TEST(TotalDuration, Examples) {
  EXPECT_EQ(total_duration(Schedule{}), 0.0);
  Schedule s;
  s.events = {Delay{10e-6}, Delay{5e-6}, VirtualZ{Channel::MW, 90},
              make_ideal_pulse(Channel::MW, 1e9, 180, 0, mw_pair(0), IdealMode::Hard)};
  EXPECT_NEAR(total_duration(s), 15e-6, 1e-20);
  const Schedule u = parse_schedule(read(std::filesystem::path(NVDD_FIXTURES) / "unprotected_4pi_a.sched"));
  EXPECT_NEAR(total_duration(u), 2.0 / 9050.0, 1e-15);
}

}  // namespace
}  // namespace nvdd
