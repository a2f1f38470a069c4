#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ocurve/errors.hpp"
#include "ocurve/pipeline.hpp"

namespace {

int logLevel() {  // 0 quiet, 1 info, 2 debug
    const char* env = std::getenv("OCURVE_LOG");
    if (!env) return 0;
    std::string v(env);
    if (v == "debug") return 2;
    if (v == "info") return 1;
    return 0;
}

void logInfo(const std::string& msg) {
    if (logLevel() >= 1) std::cerr << "[ocurve-lab] " << msg << "\n";
}

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ocl::PipelineError(ocl::ErrorCode::BadInput, "cannot open input file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void writeFile(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ocl::PipelineError(ocl::ErrorCode::BadInput, "cannot write " + path.string());
    out << content;
}

struct CommonOpts {
    std::string file;
    int order = 0;
    std::string ray = "plus";
    std::string etaHat;
    std::string t0 = "auto";
    double tmax = 0.0;
    double epsilon = 0.05;
    std::string out;
    std::string format = "text";
};

void addCommon(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("file", o.file, "Hamiltonian description file")->required();
    cmd->add_option("--order", o.order, "truncation degree (default 3N)");
    cmd->add_option("--ray", o.ray, "ray selection")->check(CLI::IsMember({"plus", "minus"}));
    cmd->add_option("--eta-hat", o.etaHat, "family parameter, comma-separated floats");
    cmd->add_option("--t0", o.t0, "start time: auto or a float");
    cmd->add_option("--tmax", o.tmax, "end time (default 100*t0)");
    cmd->add_option("--epsilon", o.epsilon, "domain radius");
    cmd->add_option("--out", o.out, "artifact output directory");
    cmd->add_option("--format", o.format, "report format")
        ->check(CLI::IsMember({"text", "json", "csv"}));
}

std::vector<double> parseCsvFloats(const std::string& text) {
    std::vector<double> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t pos = 0;
        double v = std::stod(item, &pos);
        if (pos != item.size()) throw std::invalid_argument("bad float '" + item + "'");
        out.push_back(v);
    }
    return out;
}

int runCommand(ocl::Stage stage, const CommonOpts& o) {
    ocl::PipelineOptions opt;
    opt.stage = stage;
    opt.order = o.order;
    opt.raySign = o.ray == "minus" ? -1 : +1;
    opt.etaHat = parseCsvFloats(o.etaHat);
    if (o.t0 != "auto") opt.t0 = std::stod(o.t0);
    opt.tMax = o.tmax;
    opt.epsilon = o.epsilon;

    logInfo("parsing " + o.file);
    ocl::HamiltonianSpec spec = ocl::parseSpec(readFile(o.file));
    logInfo("running pipeline");
    ocl::PipelineResult result = ocl::runPipeline(spec, opt);

    ocl::CartesianPolynomial h = spec.polynomial();
    if (o.format == "json") {
        std::cout << result.reportJson();
    } else if (o.format == "csv") {
        if (!result.curve)
            throw ocl::PipelineError(ocl::ErrorCode::BadInput,
                                     "csv format needs the ocurve or verify stage");
        std::cout << ocl::curveCsv(h, *result.curve);
    } else {
        std::cout << result.reportText();
    }

    if (!o.out.empty()) {
        std::filesystem::path dir(o.out);
        std::filesystem::create_directories(dir);
        writeFile(dir / "report.txt", result.reportText());
        writeFile(dir / "report.json", result.reportJson());
        if (result.curve) writeFile(dir / "curve.csv", ocl::curveCsv(h, *result.curve));
        if (result.verification && result.sys && result.nf)
            writeFile(dir / "trajectory.csv",
                      ocl::trajectoryCsv(h, *result.nf, result.sys->bundle.linearChange(),
                                         result.verification->trajectory));
        logInfo("artifacts written to " + dir.string());
    }

    if (!result.hypothesesHold) return 2;
    if (result.verification && !result.verification->pass) return 2;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ocurve-lab: asymptotic escape-curve analysis for resonant polynomial "
                 "Hamiltonians near an elliptic fixed point"};
    app.require_subcommand(1);

    struct Cmd {
        const char* name;
        const char* help;
        ocl::Stage stage;
    };
    const Cmd commands[] = {
        {"analyze", "resonance, hypotheses, rays: full analysis report", ocl::Stage::Analyze},
        {"normalize", "Birkhoff normal form only", ocl::Stage::Normalize},
        {"check", "verify hypotheses H1-H4", ocl::Stage::Check},
        {"rays", "Psi function and its simple zeros", ocl::Stage::Rays},
        {"reduce", "reduced hyperbolic system coefficients", ocl::Stage::Reduce},
        {"ocurve", "build an O-curve family member", ocl::Stage::OCurveStage},
        {"verify", "integrate the original system against the curve", ocl::Stage::Verify},
    };

    std::vector<std::pair<ocl::Stage, CommonOpts>> configs;
    configs.reserve(std::size(commands));
    std::vector<CLI::App*> subs;
    for (const auto& c : commands) {
        configs.emplace_back(c.stage, CommonOpts{});
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        addCommon(sub, configs.back().second);
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Normalize usage errors to the operational exit code 1; --help and
        // friends still exit 0.
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        for (size_t i = 0; i < subs.size(); ++i)
            if (subs[i]->parsed()) return runCommand(configs[i].first, configs[i].second);
        std::cerr << "no command selected\n";
        return 1;
    } catch (const ocl::PipelineError& err) {
        std::cerr << "error [" << ocl::errorCodeName(err.code()) << "]: " << err.what() << "\n";
        return err.isHypothesisFailure() ? 2 : 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
