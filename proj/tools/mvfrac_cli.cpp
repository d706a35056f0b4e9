// mvfrac: evaluate, sample and verify matrix-variate special functions and
// fractional integral operators. Every record is a single JSON value.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mvfrac/mvfrac.hpp"

namespace {

using mvfrac::json;

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_domain = 2;
constexpr int exit_usage = 64;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::regex plain_decimal(R"(^[-+]?(\d+(\.\d*)?|\.\d+)$)");

double parse_decimal(const std::string& s, const std::string& flag) {
    if (!std::regex_match(s, plain_decimal))
        throw UsageError("--" + flag + ": expected a plain decimal number, got '" + s + "'");
    return std::stod(s);
}

std::vector<double> parse_decimal_list(const std::string& s, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_decimal(item, flag));
    if (out.empty()) throw UsageError("--" + flag + ": expected a comma-separated list");
    return out;
}

mvfrac::Partition parse_partition(const std::string& s) {
    std::vector<int> parts;
    if (s.empty() || s == "()") return mvfrac::Partition{};
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!std::regex_match(item, std::regex(R"(^\d+$)")))
            throw UsageError("--partition: expected comma-separated non-negative integers");
        parts.push_back(std::stoi(item));
    }
    return mvfrac::Partition(parts);
}

const CLI::Validator PlainDecimal(
    [](std::string& s) -> std::string {
        return std::regex_match(s, plain_decimal) ? std::string{} : "expected a plain decimal number";
    },
    "DECIMAL");

/// Flags shared by subcommands; strings are parsed after CLI11 so that plain
/// decimal validation and matrix JSON parsing give uniform errors.
struct Inputs {
    int p = 0, r = 0, k = -1, kmax = 25, n = 0;
    double alpha = 0, beta = 0, eta = 0, q = 0, a = 0, b = 0, c = 0, shape = 0, tail_tol = 1e-10;
    std::string partition, eigs, matrix, zx, amat, bmat, num, den;
    std::string file;
    std::uint64_t seed = 42;
    std::uint64_t samples = 0;
    int r1 = 0, r2 = 0;
    std::string suite;
    std::string output;
};

json file_json(const Inputs& in) {
    if (in.file.empty()) return json::object();
    std::ifstream f(in.file);
    if (!f) throw UsageError("--file: cannot open '" + in.file + "'");
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("--file: invalid JSON: ") + e.what());
    }
}

/// Matrix from an inline JSON flag, else from the --file object under `key`.
std::optional<Eigen::MatrixXd> matrix_input(const Inputs& in, const std::string& inline_value,
                                            const std::string& key) {
    json j;
    if (!inline_value.empty()) {
        try {
            j = json::parse(inline_value);
        } catch (const json::parse_error&) {
            throw UsageError("--" + key + ": invalid JSON matrix");
        }
    } else {
        const json f = file_json(in);
        if (!f.contains(key)) return std::nullopt;
        j = f.at(key);
    }
    return mvfrac::matrix_from_json(j);
}

std::vector<double> eigen_input(const Inputs& in) {
    if (!in.eigs.empty()) return parse_decimal_list(in.eigs, "eigs");
    if (auto m = matrix_input(in, in.matrix, "matrix")) return mvfrac::SpdMatrix(*m).eigenvalue_list();
    throw UsageError("need --eigs or --matrix");
}

mvfrac::SpdMatrix required_spd(const Inputs& in, const std::string& inline_value, const std::string& key) {
    auto m = matrix_input(in, inline_value, key);
    if (!m) throw UsageError("need --" + key);
    return mvfrac::SpdMatrix(*m);
}

mvfrac::Partition partition_input(const Inputs& in) {
    if (!in.partition.empty()) return parse_partition(in.partition);
    return in.k > 0 ? mvfrac::Partition{in.k} : mvfrac::Partition{};
}

mvfrac::RectConfig rect_config(const Inputs& in, int p) {
    const int r = in.r ? in.r : p;
    auto a = matrix_input(in, in.amat, "amat");
    auto b = matrix_input(in, in.bmat, "bmat");
    if (r < p) throw mvfrac::DimensionError("requires r >= p");
    return mvfrac::RectConfig(a ? mvfrac::SpdMatrix(*a) : mvfrac::SpdMatrix::identity(p),
                              b ? mvfrac::SpdMatrix(*b) : mvfrac::SpdMatrix::identity(r));
}

json record(const std::string& command, const std::string& sub) {
    return {{"schema", mvfrac::schema_tag}, {"command", command}, {"subcommand", sub}};
}

json signed_log_fields(double log_abs, int sign) {
    return {{"log_value", log_abs}, {"sign", sign}, {"value", sign == 0 ? 0.0 : sign * std::exp(log_abs)}};
}

json run_eval(const std::string& sub, const Inputs& in) {
    using namespace mvfrac;
    json out = record("eval", sub);
    json inputs;
    auto merge = [&out](const json& fields) { out.update(fields); };

    if (sub == "gamma") {
        inputs = {{"p", in.p}, {"alpha", in.alpha}};
        merge(signed_log_fields(log_matrix_gamma(in.p, in.alpha), 1));
    } else if (sub == "beta") {
        inputs = {{"p", in.p}, {"alpha", in.alpha}, {"beta", in.beta}};
        merge(signed_log_fields(log_matrix_beta(in.p, in.alpha, in.beta), 1));
    } else if (sub == "pochhammer") {
        const Partition K = partition_input(in);
        inputs = {{"a", in.a}, {"partition", partition_to_json(K)}};
        const SignedLog v = gen_pochhammer_log(in.a, K);
        merge(signed_log_fields(v.log_abs, v.sign));
        out["value"] = gen_pochhammer(in.a, K);
    } else if (sub == "zonal") {
        const Partition K = partition_input(in);
        const std::vector<double> eigs = eigen_input(in);
        const ZonalTable table = build_zonal_table(K.weight(), static_cast<int>(eigs.size()));
        inputs = {{"partition", partition_to_json(K)}, {"eigenvalues", eigs}};
        out["value"] = zonal_eval(K, eigs, table);
    } else if (sub == "hyper") {
        HyperParams hp;
        if (!in.num.empty()) hp.numerator = parse_decimal_list(in.num, "num");
        if (!in.den.empty()) hp.denominator = parse_decimal_list(in.den, "den");
        const std::vector<double> eigs = eigen_input(in);
        const auto table = shared_zonal_table(in.kmax, static_cast<int>(eigs.size()));
        inputs = {{"numerator", hp.numerator}, {"denominator", hp.denominator}, {"eigenvalues", eigs},
                  {"k_max", in.kmax}, {"tail_tol", in.tail_tol}};
        merge(to_json(hyper_pfq(hp, eigs, Truncation{in.kmax, in.tail_tol}, *table)));
    } else if (sub == "fracint-power" || sub == "fracint-zonal" || sub == "saigo") {
        const SpdMatrix zx = required_spd(in, in.zx, "zx");
        const RectConfig cfg = rect_config(in, zx.dim());
        inputs = {{"p", cfg.p()}, {"r", cfg.r()}, {"alpha", in.alpha}, {"zx", matrix_to_json(zx.matrix())},
                  {"a_matrix", matrix_to_json(cfg.a().matrix())}, {"b_matrix", matrix_to_json(cfg.b().matrix())}};
        if (sub == "fracint-power") {
            inputs["eta"] = in.eta;
            merge(to_json(frac_integral_power_closed({in.alpha}, in.eta, zx, cfg)));
        } else if (sub == "fracint-zonal") {
            const Partition K = partition_input(in);
            const ZonalTable table = build_zonal_table(K.weight(), cfg.p());
            inputs["partition"] = partition_to_json(K);
            merge(to_json(frac_integral_zonal_closed({in.alpha}, K, zx, cfg, table)));
        } else {
            const SaigoParams sp{in.a, in.b, in.c, in.eta};
            const auto table = shared_zonal_table(in.kmax, cfg.p());
            inputs.update({{"a", sp.a}, {"b", sp.b}, {"c", sp.c}, {"eta", sp.eta}, {"k_max", in.kmax},
                           {"tail_tol", in.tail_tol}});
            const SaigoValue v = saigo_power_closed(sp, {in.alpha}, zx, cfg, Truncation{in.kmax, in.tail_tol}, *table);
            merge(to_json(v.result));
            out["series"] = to_json(v.series);
        }
    } else if (sub == "pathway") {
        if (!in.partition.empty()) {
            const Partition K = parse_partition(in.partition);
            inputs = {{"q", in.q}, {"partition", partition_to_json(K)}};
            out["value"] = pathway_factor(in.q, K);
        } else {
            const std::vector<double> eigs = eigen_input(in);
            inputs = {{"q", in.q}, {"eigenvalues", eigs}};
            out["value"] = pathway_det_limit(in.q, eigs);
        }
    } else {
        throw UsageError("unknown eval subcommand '" + sub + "'");
    }
    out["inputs"] = inputs;
    return out;
}

void emit(const Inputs& in, const std::string& text) {
    if (in.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(in.output);
    if (!f) throw UsageError("--output: cannot open '" + in.output + "'");
    f << text;
}

std::string run_sample(const std::string& kind, const Inputs& in) {
    using namespace mvfrac;
    std::ostringstream os;
    auto line = [&](std::uint64_t i, const Eigen::MatrixXd& m) {
        json rec = {{"schema", schema_tag}, {"kind", kind}, {"index", i}, {"matrix", matrix_to_json(m)}};
        os << rec.dump() << '\n';
    };
    const auto n = static_cast<std::uint64_t>(in.n);
    if (kind == "matrix-gamma") {
        const auto draws = sample_matrix_gamma({in.p, in.shape}, n, in.seed);
        for (std::uint64_t i = 0; i < draws.size(); ++i) line(i, draws[i].matrix());
    } else if (kind == "rect-exponential") {
        const RectConfig cfg = rect_config(in, in.p);
        const auto draws = sample_rect_exponential(cfg, n, in.seed);
        for (std::uint64_t i = 0; i < draws.size(); ++i) line(i, draws[i].matrix());
    } else if (kind == "uniform-unit-cone") {
        const auto draws = sample_uniform_spd_unit(in.p, n, in.seed);
        for (std::uint64_t i = 0; i < draws.samples.size(); ++i) line(i, draws.samples[i].matrix());
    } else {
        throw UsageError("unknown sample kind '" + kind + "'");
    }
    return os.str();
}

/// key=value lines become trailing "--key value" arguments unless the flag
/// is already on the command line.
std::vector<std::string> with_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty()) return args;
    std::ifstream f(path);
    if (!f) throw UsageError("--config: cannot open '" + path + "'");
    std::string text;
    while (std::getline(f, text)) {
        const auto hash = text.find('#');
        if (hash != std::string::npos) text.erase(hash);
        const auto eq = text.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) continue;
        const std::string flag = "--" + key;
        bool present = false;
        for (const auto& a : args) present = present || a == flag || a.rfind(flag + "=", 0) == 0;
        if (!present) {
            args.push_back(flag);
            args.push_back(value);
        }
    }
    return args;
}

void add_common(CLI::App* app, Inputs& in) {
    app->add_option("--output", in.output, "Write output to this path instead of stdout");
    app->add_option("--file", in.file, "JSON object providing matrices (keys: zx, amat, bmat, matrix)");
}

}  // namespace

int main(int argc, char** argv) {
    Inputs in;
    CLI::App app{"Matrix-variate special functions and fractional integral operators"};
    app.require_subcommand(1);

    auto* eval = app.add_subcommand("eval", "Evaluate one library operation");
    eval->require_subcommand(1);
    const std::vector<std::string> eval_subs = {"gamma",         "beta",          "pochhammer", "zonal", "hyper",
                                                "fracint-power", "fracint-zonal", "saigo",      "pathway"};
    for (const auto& name : eval_subs) {
        auto* s = eval->add_subcommand(name);
        add_common(s, in);
        s->add_option("--p", in.p, "Matrix dimension");
        s->add_option("--r", in.r, "Column count of the rectangular argument (default p)");
        s->add_option("--alpha", in.alpha)->check(PlainDecimal);
        s->add_option("--beta", in.beta)->check(PlainDecimal);
        s->add_option("--eta", in.eta)->check(PlainDecimal);
        s->add_option("--q", in.q)->check(PlainDecimal);
        s->add_option("--a", in.a)->check(PlainDecimal);
        s->add_option("--b", in.b)->check(PlainDecimal);
        s->add_option("--c", in.c)->check(PlainDecimal);
        s->add_option("--k", in.k, "Weight k; used as the one-part partition (k) when --partition is absent");
        s->add_option("--kmax", in.kmax, "Series truncation weight");
        s->add_option("--tail-tol", in.tail_tol)->check(PlainDecimal);
        s->add_option("--partition", in.partition, "Partition as comma-separated parts, e.g. 2,1");
        s->add_option("--eigs", in.eigs, "Eigenvalues of the argument, comma-separated");
        s->add_option("--matrix", in.matrix, "Symmetric argument as a JSON array of rows");
        s->add_option("--zx", in.zx, "Z_X as a JSON array of rows");
        s->add_option("--amat", in.amat, "A (p x p) as JSON; default identity");
        s->add_option("--bmat", in.bmat, "B (r x r) as JSON; default identity");
        s->add_option("--num", in.num, "Numerator parameters, comma-separated");
        s->add_option("--den", in.den, "Denominator parameters, comma-separated");
    }

    auto* verify = app.add_subcommand("verify", "Run an oracle comparison suite");
    add_common(verify, in);
    verify->add_option("--suite", in.suite)->required()->check(CLI::IsMember(mvfrac::verify_suite_names()));
    verify->add_option("--samples", in.samples, "Monte Carlo sample count (suite default when omitted)");
    verify->add_option("--seed", in.seed);
    verify->add_option("--kmax", in.kmax);
    verify->add_option("--p", in.p);
    verify->add_option("--r1", in.r1);
    verify->add_option("--r2", in.r2);

    auto* sample = app.add_subcommand("sample", "Draw seeded samples as JSON lines");
    sample->require_subcommand(1);
    for (const std::string name : {"matrix-gamma", "rect-exponential", "uniform-unit-cone"}) {
        auto* s = sample->add_subcommand(name);
        add_common(s, in);
        s->add_option("--p", in.p)->required();
        s->add_option("--r", in.r);
        s->add_option("--shape", in.shape)->check(PlainDecimal);
        s->add_option("--n", in.n)->required();
        s->add_option("--seed", in.seed);
        s->add_option("--amat", in.amat);
        s->add_option("--bmat", in.bmat);
    }

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = with_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    } catch (const UsageError& e) {
        std::cerr << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (eval->parsed()) {
            for (auto* s : eval->get_subcommands()) {
                emit(in, run_eval(s->get_name(), in).dump() + "\n");
            }
            return exit_pass;
        }
        if (verify->parsed()) {
            mvfrac::VerifyOptions opts;
            opts.samples = in.samples;
            opts.seed = in.seed;
            opts.k_max = in.kmax;
            opts.p = in.p;
            opts.r1 = in.r1;
            opts.r2 = in.r2;
            const mvfrac::SuiteReport rep = mvfrac::run_verify_suite(in.suite, opts);
            emit(in, rep.to_json(opts).dump() + "\n");
            return rep.pass ? exit_pass : exit_fail;
        }
        if (sample->parsed()) {
            for (auto* s : sample->get_subcommands()) emit(in, run_sample(s->get_name(), in));
            return exit_pass;
        }
    } catch (const UsageError& e) {
        std::cerr << e.what() << '\n';
        return exit_usage;
    } catch (const mvfrac::Error& e) {
        const json err = {{"schema", mvfrac::schema_tag},
                          {"error", {{"kind", e.kind()}, {"message", e.what()}}}};
        std::cout << err.dump() << '\n';
        return exit_domain;
    } catch (const std::exception& e) {
        const json err = {{"schema", mvfrac::schema_tag}, {"error", {{"kind", "internal"}, {"message", e.what()}}}};
        std::cout << err.dump() << '\n';
        return exit_domain;
    }
    return exit_usage;
}
