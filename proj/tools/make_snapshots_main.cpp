#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "marketcast/synth.hpp"

// Generates the six calibrated synthetic exchange snapshots used for offline
// runs of the benchmark.
int main(int argc, char** argv) {
    CLI::App app{"marketcast-make-snapshots - write synthetic OHLCV snapshots"};
    std::string out = "data";
    std::uint64_t seed = marketcast::synth::SynthOptions{}.seed;
    app.add_option("--out", out, "output directory");
    app.add_option("--seed", seed, "generator seed");
    CLI11_PARSE(app, argc, argv);

    try {
        marketcast::synth::SynthOptions options;
        options.seed = seed;
        marketcast::synth::write_snapshots(out, options);
        for (const auto& profile : marketcast::synth::reference_profiles()) {
            std::cout << "wrote " << out << "/" << profile.asset_id << ".csv\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
