#include "kaonpair/cli/config.hpp"

#include "kaonpair/errors.hpp"
#include "kaonpair_default_config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace kaonpair::cli {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Key/value pairs of one section, with the line each came from.
struct Entry {
    std::string value;
    std::size_t line = 0;
};

struct Section {
    std::string kind; // "", "channel", "generate"
    std::string name;
    std::size_t line = 0;
    std::map<std::string, Entry, std::less<>> entries;
};

class Reader {
public:
    explicit Reader(std::string_view source) : source_(source) {}

    [[noreturn]] void fail(std::size_t line, const std::string& message) const
    {
        throw ConfigError(source_, line, message);
    }

    double real(const Section& s, std::string_view key, std::optional<double> fallback) const
    {
        const auto it = s.entries.find(key);
        if (it == s.entries.end()) {
            if (!fallback)
                fail(s.line, fmt::format("missing required key '{}'{}", key, where(s)));
            return *fallback;
        }
        const std::string& text = it->second.value;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
            fail(it->second.line, fmt::format("'{}' is not a finite number: '{}'", key, text));
        return v;
    }

    std::optional<double> optional_real(const Section& s, std::string_view key) const
    {
        if (!s.entries.contains(key))
            return std::nullopt;
        return real(s, key, std::nullopt);
    }

    std::uint64_t integer(const Section& s, std::string_view key, std::uint64_t fallback) const
    {
        const auto it = s.entries.find(key);
        if (it == s.entries.end())
            return fallback;
        const std::string& text = it->second.value;
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size())
            fail(it->second.line, fmt::format("'{}' is not a non-negative integer: '{}'", key, text));
        return v;
    }

    std::size_t line_of(const Section& s, std::string_view key) const
    {
        const auto it = s.entries.find(key);
        return it == s.entries.end() ? s.line : it->second.line;
    }

    static std::string where(const Section& s)
    {
        if (s.kind.empty())
            return "";
        return s.name.empty() ? fmt::format(" in [{}]", s.kind) : fmt::format(" in [{} {}]", s.kind, s.name);
    }

private:
    std::string source_;
};

const std::map<std::string, std::vector<std::string_view>, std::less<>>& allowed_keys()
{
    static const std::map<std::string, std::vector<std::string_view>, std::less<>> keys{
        {"", {"gamma_s", "gamma_l", "delta_m", "epsilon_s_re", "epsilon_s_im", "epsilon_l_re", "epsilon_l_im"}},
        {"channel", {"eta_abs", "eta_phase", "amp_s_abs", "amp_s_phase", "weight"}},
        {"generate", {"n_events", "t_max", "seed", "beta_k"}},
    };
    return keys;
}

std::vector<Section> tokenize(std::istream& in, const Reader& reader)
{
    std::vector<Section> sections(1);
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                reader.fail(number, "unterminated section header");
            const std::string_view inner = trim(line.substr(1, line.size() - 2));
            const auto space = inner.find_first_of(" \t");
            Section s;
            s.kind = std::string(inner.substr(0, space));
            s.name = space == std::string_view::npos ? std::string() : std::string(trim(inner.substr(space)));
            s.line = number;
            if (s.kind == "channel") {
                if (s.name.empty() || s.name.find_first_of(" \t,") != std::string::npos)
                    reader.fail(number, "channel id must be a non-empty word without commas");
                for (const auto& other : sections)
                    if (other.kind == "channel" && other.name == s.name)
                        reader.fail(number, fmt::format("duplicate channel id '{}'", s.name));
            } else if (s.kind == "generate") {
                if (!s.name.empty())
                    reader.fail(number, "[generate] takes no name");
                for (const auto& other : sections)
                    if (other.kind == "generate")
                        reader.fail(number, "duplicate [generate] section");
            } else {
                reader.fail(number, fmt::format("unknown section '{}'", s.kind));
            }
            sections.push_back(std::move(s));
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            reader.fail(number, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty())
            reader.fail(number, "empty key or value");
        Section& current = sections.back();
        const auto& allowed = allowed_keys().find(current.kind)->second;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            reader.fail(number, fmt::format("unknown key '{}'{}", key, Reader::where(current)));
        if (current.entries.contains(key))
            reader.fail(number, fmt::format("duplicate key '{}'", key));
        current.entries.emplace(key, Entry{value, number});
    }
    return sections;
}

} // namespace

ConfigError::ConfigError(std::string source, std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("{}:{}: {}", source, line, message) : fmt::format("{}: {}", source, message))
    , line_(line)
{
}

DecayChannel ChannelSpec::to_channel() const
{
    return DecayChannel(id, std::polar(eta_abs, eta_phase), std::polar(amp_s_abs, amp_s_phase));
}

LyContext RunConfig::context() const
{
    std::vector<DecayChannel> list;
    list.reserve(channels.size());
    for (const auto& c : channels)
        list.push_back(c.to_channel());
    return LyContext(physics, cp, std::move(list));
}

GeneratorConfig RunConfig::generator_config() const
{
    GeneratorConfig g;
    for (const auto& c : channels)
        g.channels.push_back({c.id, c.weight});
    g.t_max = generate.t_max.value_or(std::log(1e7) / physics.gamma_l());
    g.n_events = generate.n_events;
    g.seed = generate.seed;
    g.beta_k = generate.beta_k;
    return g;
}

RunConfig parse_config(std::istream& in, std::string_view source)
{
    const Reader reader(source);
    const std::vector<Section> sections = tokenize(in, reader);
    const Section& top = sections.front();

    const double gamma_s = reader.real(top, "gamma_s", std::nullopt);
    const double gamma_l = reader.real(top, "gamma_l", std::nullopt);
    const double delta_m = reader.real(top, "delta_m", std::nullopt);
    if (!(gamma_l > 0.0))
        reader.fail(reader.line_of(top, "gamma_l"), "gamma_l must be positive");
    if (!(gamma_s > gamma_l))
        reader.fail(reader.line_of(top, "gamma_s"), "gamma_s must exceed gamma_l");

    const Complex eps_s{reader.real(top, "epsilon_s_re", 0.0), reader.real(top, "epsilon_s_im", 0.0)};
    const Complex eps_l{reader.real(top, "epsilon_l_re", 0.0), reader.real(top, "epsilon_l_im", 0.0)};
    if (!(std::abs(eps_s) < 1.0))
        reader.fail(reader.line_of(top, "epsilon_s_re"), "|epsilon_s| must be below 1");
    if (!(std::abs(eps_l) < 1.0))
        reader.fail(reader.line_of(top, "epsilon_l_re"), "|epsilon_l| must be below 1");

    RunConfig config{PhysicsParams(gamma_s, gamma_l, delta_m), CpParams(eps_s, eps_l), {}, {}};
    try {
        build_stationary_states(config.cp);
    } catch (const DegenerateBasisError& e) {
        reader.fail(reader.line_of(top, "epsilon_s_re"), e.what());
    }

    for (const Section& s : sections) {
        if (s.kind == "channel") {
            ChannelSpec c;
            c.id = s.name;
            c.eta_abs = reader.real(s, "eta_abs", std::nullopt);
            c.eta_phase = reader.real(s, "eta_phase", 0.0);
            c.amp_s_abs = reader.real(s, "amp_s_abs", 1.0);
            c.amp_s_phase = reader.real(s, "amp_s_phase", 0.0);
            c.weight = reader.real(s, "weight", 1.0);
            if (c.eta_abs < 0.0)
                reader.fail(reader.line_of(s, "eta_abs"), "eta_abs must be non-negative");
            if (!(c.amp_s_abs > 0.0))
                reader.fail(reader.line_of(s, "amp_s_abs"), "amp_s_abs must be positive");
            if (c.weight < 0.0)
                reader.fail(reader.line_of(s, "weight"), "weight must be non-negative");
            config.channels.push_back(std::move(c));
        } else if (s.kind == "generate") {
            GenerateSection& g = config.generate;
            g.n_events = reader.integer(s, "n_events", g.n_events);
            g.seed = reader.integer(s, "seed", g.seed);
            g.t_max = reader.optional_real(s, "t_max");
            g.beta_k = reader.optional_real(s, "beta_k");
            if (g.n_events < 1)
                reader.fail(reader.line_of(s, "n_events"), "n_events must be at least 1");
            if (g.t_max && !(*g.t_max > 0.0))
                reader.fail(reader.line_of(s, "t_max"), "t_max must be positive");
            if (g.beta_k && !(*g.beta_k >= 0.0 && *g.beta_k < 1.0))
                reader.fail(reader.line_of(s, "beta_k"), "beta_k must lie in [0, 1)");
        }
    }
    if (config.channels.empty())
        reader.fail(0, "no [channel] blocks");
    return config;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path.string(), 0, "cannot open file");
    return parse_config(in, path.string());
}

std::string_view default_config_text() { return kDefaultConfigText; }

RunConfig default_config()
{
    std::istringstream in{std::string(kDefaultConfigText)};
    return parse_config(in, "<built-in defaults>");
}

} // namespace kaonpair::cli
