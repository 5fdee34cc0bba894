// Command line front end.  Every subcommand goes through the C API: `run`
// executes a shipped study config, `convolve` evaluates one operator
// application against its closed form, and `fode` / `subdiffusion` /
// `westervelt` assemble a sweep config from flags and hand it to the same
// study runner.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <string>
#include <vector>

#include "gcq/gcq.h"

namespace {

int usage(FILE* to) {
    std::fprintf(to,
                 "usage:\n"
                 "  gcq-kit run <config-file>\n"
                 "  gcq-kit convolve --kernel SPEC --mesh SPEC [--tableau ID]\n"
                 "          [--data t^B] [--engine fast|direct] [--tol X] --out FILE.csv\n"
                 "  gcq-kit fode --alpha A [--beta1 B --beta2 B --sigma S]\n"
                 "          --mesh FAMILY --N LIST [mesh flags] [--tableau ID] [--tol X]\n"
                 "          --out PREFIX\n"
                 "  gcq-kit subdiffusion --alpha A [--dim D --J J] --mesh FAMILY --N LIST\n"
                 "          [mesh flags] [--tableau ID] [--tol X] --out PREFIX\n"
                 "  gcq-kit westervelt --alpha A [--kappa K --J J --fp-tol X] --mesh FAMILY\n"
                 "          --N LIST [mesh flags] [--tableau ID] [--tol X] --out PREFIX\n"
                 "\n"
                 "mesh FAMILY: uniform | graded | twosing | random;\n"
                 "mesh flags: --T H --gamma G --gamma1 G --gamma2 G --sigma S --seed S\n"
                 "GCQ_THREADS caps how many sweep levels run at once.\n");
    return to == stderr ? 2 : 0;
}

int die(const char* what) {
    std::fprintf(stderr, "gcq-kit: %s: %s\n", what, gcq_last_error());
    return 1;
}

using Flags = std::map<std::string, std::string>;

bool parse_flags(int argc, char** argv, int from, Flags& out) {
    for (int i = from; i < argc; i += 2) {
        if (std::strncmp(argv[i], "--", 2) != 0 || i + 1 >= argc) return false;
        out[argv[i] + 2] = argv[i + 1];
    }
    return true;
}

std::string flag(const Flags& f, const char* key, const char* fallback) {
    auto it = f.find(key);
    return it == f.end() ? std::string(fallback) : it->second;
}

bool has(const Flags& f, const char* key) { return f.count(key) != 0; }

int cmd_run(int argc, char** argv) {
    if (argc != 3) return usage(stderr);
    if (gcq_experiment_file(argv[2]) != GCQ_OK) return die("run");
    return 0;
}

int cmd_convolve(int argc, char** argv) {
    Flags f;
    if (!parse_flags(argc, argv, 2, f)) return usage(stderr);
    if (!has(f, "kernel") || !has(f, "mesh") || !has(f, "out")) return usage(stderr);
    const std::string data = flag(f, "data", "t^0");
    if (data.rfind("t^", 0) != 0) {
        std::fprintf(stderr, "gcq-kit: --data must look like t^0.5\n");
        return 2;
    }
    gcq_run* run = nullptr;
    const gcq_status rc = gcq_convolve(
        flag(f, "kernel", "").c_str(), flag(f, "tableau", "radau2").c_str(),
        flag(f, "mesh", "").c_str(), std::atof(data.c_str() + 2),
        flag(f, "engine", "fast").c_str(), std::atof(flag(f, "tol", "1e-12").c_str()),
        &run);
    if (rc != GCQ_OK) return die("convolve");

    const std::string path = flag(f, "out", "");
    FILE* out = std::fopen(path.c_str(), "wb");
    if (!out) {
        std::fprintf(stderr, "gcq-kit: cannot write %s\n", path.c_str());
        gcq_run_free(run);
        return 1;
    }
    const int rows = gcq_run_rows(run), cols = gcq_run_columns(run);
    std::vector<std::vector<double>> v(static_cast<size_t>(cols),
                                       std::vector<double>(static_cast<size_t>(rows)));
    std::fprintf(out, "n");
    for (int c = 0; c < cols; ++c) {
        std::fprintf(out, ",%s", gcq_run_column_name(run, c));
        gcq_run_values(run, c, v[size_t(c)].data(), rows);
    }
    std::fprintf(out, "\n");
    for (int r = 0; r < rows; ++r) {
        std::fprintf(out, "%d", r);
        for (int c = 0; c < cols; ++c) std::fprintf(out, ",%.17g", v[size_t(c)][size_t(r)]);
        std::fprintf(out, "\n");
    }
    std::fclose(out);
    gcq_run_free(run);
    return 0;
}

int cmd_sweep(const char* kind, int argc, char** argv) {
    Flags f;
    if (!parse_flags(argc, argv, 2, f)) return usage(stderr);
    if (!has(f, "alpha") || !has(f, "mesh") || !has(f, "N") || !has(f, "out"))
        return usage(stderr);
    std::string cfg;
    cfg += "id = " + std::string(kind) + "\n";
    cfg += "alpha = " + flag(f, "alpha", "0.5") + "\n";
    cfg += "mesh = " + flag(f, "mesh", "graded") + "\n";
    cfg += "N = " + flag(f, "N", "") + "\n";
    cfg += "tableau = " + flag(f, "tableau", "radau2") + "\n";
    cfg += "tol = " + flag(f, "tol", "1e-10") + "\n";
    cfg += "out = " + flag(f, "out", "gcq") + "\n";
    const char* pass[] = {"T",     "gamma", "gamma1", "gamma2", "sigma",
                          "seed",  "beta1", "beta2",  "kappa",  "J",
                          "dim"};
    for (const char* key : pass)
        if (has(f, key)) cfg += std::string(key) + " = " + f.at(key) + "\n";
    if (has(f, "fp-tol")) cfg += "fp_tol = " + f.at("fp-tol") + "\n";
    if (gcq_experiment_text(cfg.c_str()) != GCQ_OK) return die(kind);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) return usage(stderr);
    const std::string cmd = argv[1];
    if (cmd == "help" || cmd == "--help" || cmd == "-h") return usage(stdout);
    if (cmd == "run") return cmd_run(argc, argv);
    if (cmd == "convolve") return cmd_convolve(argc, argv);
    if (cmd == "fode" || cmd == "subdiffusion" || cmd == "westervelt")
        return cmd_sweep(argv[1], argc, argv);
    return usage(stderr);
}
