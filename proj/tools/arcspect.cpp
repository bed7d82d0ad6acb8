#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "arcspect/errors.hpp"
#include "cli/commands.hpp"

namespace {

std::string g_out_dir = "out";

int fail(const std::string& command, const std::string& kind, const std::string& message, int code) {
    std::cerr << "arcspect: " << kind << ": " << message << '\n';
    arcspect::cli::write_error_record(g_out_dir, command, kind, message, code);
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resonances of dielectric elliptic cavities"};
    app.allow_extras();
    std::string command;
    std::optional<std::string> config_path, preset, out_dir;
    std::optional<int> workers;
    app.add_option("command", command, "solve | sweep | field | husimi | arc | toy | oracle")
        ->required()
        ->check(CLI::IsMember({"solve", "sweep", "field", "husimi", "arc", "toy", "oracle"}));
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--preset", preset, "arc-paper | regimes");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--workers", workers, "worker threads");
    app.footer("Any other configuration field can be overridden with --key value (dotted keys for nested fields).");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    if (out_dir) g_out_dir = *out_dir;

    try {
        std::vector<std::pair<std::string, std::string>> overrides;
        const auto extras = app.remaining();
        for (std::size_t i = 0; i < extras.size(); ++i) {
            std::string key = extras[i];
            if (key.rfind("--", 0) != 0 || key.size() < 3)
                throw arcspect::ConfigError("unexpected argument '" + key + "'");
            key = key.substr(2);
            std::string value;
            if (const auto eq = key.find('='); eq != std::string::npos) {
                value = key.substr(eq + 1);
                key = key.substr(0, eq);
            } else {
                if (i + 1 >= extras.size()) throw arcspect::ConfigError("--" + key + " needs a value");
                value = extras[++i];
            }
            overrides.emplace_back(key, value);
        }
        if (out_dir) overrides.emplace_back("out", nlohmann::json(*out_dir).dump());
        if (workers) overrides.emplace_back("workers", std::to_string(*workers));

        const auto document = arcspect::cli::merge_document(preset, config_path, overrides);
        if (document.contains("out") && document["out"].is_string()) g_out_dir = document["out"].get<std::string>();
        const auto config = arcspect::cli::parse_config(document);
        arcspect::cli::execute(command, config);
        return 0;
    } catch (const arcspect::Error& e) {
        return fail(command, e.kind(), e.what(), e.exit_code());
    } catch (const std::exception& e) {
        return fail(command, "InternalError", e.what(), 1);
    }
}
