#include <filesystem>
#include <future>
#include <iostream>
#include <regex>

#include "CLI11.hpp"
#include "dirac11/scenario.hpp"

namespace fs = std::filesystem;

namespace {

d11::ScenarioConfig resolve(const std::string& source, const std::vector<std::string>& overrides)
{
    if (source.rfind("preset:", 0) == 0) {
        std::string name = source.substr(7);
        auto text = d11::preset_text(name);
        if (!text)
            throw d11::ConfigError(source, "no built-in preset named " + name);
        return d11::parse_config(*text, overrides);
    }
    return d11::load_config(source, overrides);
}

int run_one(const std::string& source, const std::vector<std::string>& overrides, std::ostream& log)
{
    try {
        return d11::execute(resolve(source, overrides), log);
    } catch (const d11::ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        log << "config error: " << e.what() << "\n";
        return 2;
    }
}

std::regex glob_regex(const std::string& glob)
{
    std::string re;
    for (char ch : glob) {
        if (ch == '*')
            re += "[^/]*";
        else if (ch == '?')
            re += "[^/]";
        else if (std::string("\\^$.|+()[]{}").find(ch) != std::string::npos)
            re += std::string("\\") + ch;
        else
            re += ch;
    }
    return std::regex(re);
}

std::vector<std::string> expand(const std::string& pattern)
{
    fs::path p(pattern);
    fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
    std::regex re = glob_regex(p.filename().string());
    std::vector<std::string> out;
    if (fs::is_directory(dir))
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_regular_file() && std::regex_match(e.path().filename().string(), re))
                out.push_back(e.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"dirac11: 1+1 dimensional Dirac-type scenarios"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a config file or preset:<name>");
    std::string source;
    std::vector<std::string> overrides;
    run->add_option("config", source, "config path or preset:<name>")->required();
    run->add_option("--set", overrides, "override section.key=value");

    app.add_subcommand("list", "list built-in presets");

    auto* show = app.add_subcommand("show", "print a built-in preset");
    std::string shown;
    show->add_option("preset", shown)->required();

    auto* sweep = app.add_subcommand("sweep", "run every config matching a glob concurrently");
    std::string pattern;
    sweep->add_option("glob", pattern)->required();

    CLI11_PARSE(app, argc, argv);

    if (*run)
        return run_one(source, overrides, std::cerr);

    if (app.got_subcommand("list")) {
        for (const auto& [name, text] : d11::builtin_presets()) {
            auto c = d11::parse_config(text);
            std::cout << name << "  " << c.model << "  N=" << c.N << "\n";
        }
        return 0;
    }

    if (*show) {
        auto text = d11::preset_text(shown);
        if (!text) {
            std::cerr << "no built-in preset named " << shown << "\n";
            return 2;
        }
        std::cout << *text;
        return 0;
    }

    auto files = expand(pattern);
    if (files.empty()) {
        std::cerr << "no configs match " << pattern << "\n";
        return 2;
    }
    std::vector<std::future<std::pair<int, std::string>>> jobs;
    for (const auto& f : files)
        jobs.push_back(std::async(std::launch::async, [f] {
            std::ostringstream log;
            int code = run_one(f, {}, log);
            return std::make_pair(code, log.str());
        }));
    int worst = 0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        auto [code, log] = jobs[i].get();
        std::cerr << log;
        worst = std::max(worst, code);
    }
    return worst;
}
