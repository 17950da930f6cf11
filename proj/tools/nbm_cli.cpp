#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "nbm/algorithm.hpp"
#include "nbm/exact.hpp"
#include "nbm/io.hpp"
#include "nbm/verify.hpp"

namespace {

using nbm::Json;

struct RunConfig {
    std::string input_path;
    std::string tolerance;
    std::string ordering = "deglex";
    std::string format = "text";
    int digits = 5;
    bool unit_box_rescale = false;
    std::string well_separated = "warn";
    std::uint64_t seed = 1;
    std::size_t trials = 1000;
    bool step_log = false;
};

struct Loaded {
    nbm::PointInput input;
    nbm::EmpiricalPointSet points;
    nbm::VariableNames names;
    nbm::TermOrdering ordering;
};

Loaded load(const RunConfig& cfg, bool tolerance_required = true) {
    nbm::PointInput input = nbm::load_points(cfg.input_path);
    const auto n = input.coordinates.cols();
    Eigen::VectorXd tol;
    if (!cfg.tolerance.empty()) {
        tol = nbm::parse_tolerance(cfg.tolerance, n);
    } else if (input.tolerance) {
        tol = *input.tolerance;
    } else if (tolerance_required) {
        throw std::invalid_argument("no tolerance given (use --tol)");
    } else {
        tol = Eigen::VectorXd::Zero(n);
    }
    nbm::VariableNames names(static_cast<std::size_t>(n));
    nbm::TermOrdering ordering = nbm::parse_ordering(cfg.ordering, names);
    nbm::EmpiricalPointSet points(input.coordinates, tol);
    return {std::move(input), std::move(points), std::move(names), std::move(ordering)};
}

nbm::NbmOptions options_for(const RunConfig& cfg) {
    nbm::NbmOptions opts;
    opts.separation = cfg.well_separated == "error" ? nbm::SeparationPolicy::Error : nbm::SeparationPolicy::Warn;
    return opts;
}

Json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// The ideal O had when t was the current candidate: its members below t.
nbm::OrderIdeal ideal_before(const nbm::OrderIdeal& ideal, const nbm::PowerProduct& t) {
    std::vector<nbm::PowerProduct> terms;
    for (const auto& o : ideal.terms()) {
        if (ideal.ordering().less(o, t)) terms.push_back(o);
    }
    return nbm::OrderIdeal(std::move(terms), ideal.ordering());
}

void emit(const RunConfig& cfg, const Json& j, const std::string& text) {
    if (cfg.format == "json") {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << text;
    }
}

int cmd_compute(const RunConfig& cfg) {
    const Loaded in = load(cfg);
    const nbm::NbmOptions opts = options_for(cfg);
    const nbm::NbmResult result = nbm::run_nbm(in.points, in.ordering, opts);

    Json j = nbm::to_json(result, cfg.step_log || cfg.format == "json");
    std::string text = nbm::format_text(result, in.names, cfg.digits, cfg.step_log);
    if (cfg.unit_box_rescale) {
        const nbm::UnitBoxTransform tr = nbm::unit_box_transform(in.points);
        const nbm::EmpiricalPointSet boxed = tr.apply(in.points);
        const nbm::NbmResult scaled = nbm::run_nbm(boxed, in.ordering, opts);
        const bool same = scaled.order_ideal.same_terms(result.order_ideal);
        const nbm::P1Report p1 = nbm::check_p1(scaled, boxed);
        j["unit_box_rescale"] = {{"shift", vector_json(tr.shift)},
                                 {"factors", vector_json(tr.factors)},
                                 {"same_order_ideal", same},
                                 {"p1", nbm::to_json(p1, in.names)}};
        text += "unit-box rescale: shift " + vector_json(tr.shift).dump() + ", factors " +
                vector_json(tr.factors).dump() + "; O unchanged: " + (same ? "yes" : "no") +
                "; P1 on rescaled data: " + (p1.passed() ? "holds" : "fails") + "\n";
        if (!same) {
            std::cerr << "error: rescaled run produced a different order ideal\n";
            emit(cfg, j, text);
            return 1;
        }
    }
    emit(cfg, j, text);
    return 0;
}

int cmd_exact(const RunConfig& cfg) {
    const nbm::PointInput input = nbm::load_points(cfg.input_path);
    const nbm::VariableNames names(static_cast<std::size_t>(input.coordinates.cols()));
    const nbm::TermOrdering ordering = nbm::parse_ordering(cfg.ordering, names);
    const nbm::ExactBasis basis = nbm::exact_bm(nbm::to_rational(input), ordering);
    emit(cfg, nbm::to_json(basis, names), nbm::format_text(basis, names));
    return 0;
}

struct VerifyFlags {
    bool all = false;
    bool scaling = false;
    bool translation = false;
    bool p1 = false;
    bool p3 = false;
    std::string zero_set;
    std::size_t count = 20;
};

int cmd_verify(const RunConfig& cfg, const VerifyFlags& flags) {
    const Loaded in = load(cfg);
    const nbm::NbmResult result = nbm::run_nbm(in.points, in.ordering, options_for(cfg));
    Json j;
    std::string text = "O = " + nbm::format_terms(result.order_ideal.terms(), in.names) + "\n";
    bool ok = true;
    const bool any = flags.scaling || flags.translation || flags.p1 || flags.p3 || !flags.zero_set.empty();
    const bool all = flags.all || !any;

    if (all || flags.scaling || flags.translation) {
        const auto r = nbm::invariance_suite(in.points, in.ordering, flags.count, cfg.seed);
        const bool scaling_ok = r.scalings_passed == r.scalings;
        const bool translation_ok = r.translations_passed == r.translations;
        if (all || flags.scaling) {
            ok = ok && scaling_ok;
            j["scaling_invariance"] = {{"runs", r.scalings}, {"passed", r.scalings_passed}};
            text += "scaling invariance: " + std::string(scaling_ok ? "pass" : "FAIL") + " (" +
                    std::to_string(r.scalings_passed) + "/" + std::to_string(r.scalings) + ")\n";
        }
        if (all || flags.translation) {
            ok = ok && translation_ok;
            j["translation_invariance"] = {{"runs", r.translations}, {"passed", r.translations_passed}};
            text += "translation invariance: " + std::string(translation_ok ? "pass" : "FAIL") + " (" +
                    std::to_string(r.translations_passed) + "/" + std::to_string(r.translations) + ")\n";
        }
    }
    if (all || flags.p1) {
        nbm::P1Report p1;
        if (cfg.unit_box_rescale) {
            const nbm::EmpiricalPointSet boxed = nbm::unit_box_transform(in.points).apply(in.points);
            p1 = nbm::check_p1(nbm::run_nbm(boxed, in.ordering), boxed, 100, cfg.seed);
        } else {
            p1 = nbm::check_p1(result, in.points, 100, cfg.seed);
        }
        ok = ok && p1.passed();
        j["p1"] = nbm::to_json(p1, in.names);
        text += "P1: " + std::string(p1.skipped ? p1.notice : p1.passed() ? "pass" : "FAIL") + "\n";
    }
    if (!flags.zero_set.empty()) {
        const nbm::PointInput z = nbm::load_points(flags.zero_set);
        const nbm::EmpiricalPointSet claimed(z.coordinates, in.points.tolerance());
        const bool p2 = nbm::check_p2_on_zero_set(result.polys, claimed, in.points);
        ok = ok && p2;
        j["p2"] = {{"passed", p2}};
        text += "P2: " + std::string(p2 ? "pass" : "FAIL") + "\n";
    }
    if (all || flags.p3) {
        const nbm::P3Report p3 = nbm::check_p3_border(result, in.points);
        ok = ok && p3.passed();
        j["p3"] = nbm::to_json(p3, in.names);
        text += "P3: " + std::string(p3.skipped ? p3.notice : p3.passed() ? "pass" : "FAIL") + "\n";
    }
    j["passed"] = ok;
    text += ok ? "all enabled checks passed\n" : "some checks failed\n";
    emit(cfg, j, text);
    return ok ? 0 : 1;
}

int cmd_stability(const RunConfig& cfg) {
    const Loaded in = load(cfg);
    const nbm::NbmResult result = nbm::run_nbm(in.points, in.ordering, options_for(cfg));
    const nbm::StabilityReport r =
        nbm::monte_carlo_stability(in.points, result.order_ideal, cfg.trials, cfg.seed, result.steps);
    Json j = nbm::to_json(r);
    j["order_ideal"] = nbm::format_terms(result.order_ideal.terms(), in.names);
    std::string text = "O = " + nbm::format_terms(result.order_ideal.terms(), in.names) + "\n" +
                       "trials: " + std::to_string(r.trials) + "\n" +
                       "rank failures: " + std::to_string(r.rank_failures) + "\n" +
                       "min smallest singular value: " + nbm::shortest_decimal(r.min_smallest_singular_value) + "\n" +
                       "min relative singular value: " + nbm::shortest_decimal(r.min_relative_singular_value) + "\n" +
                       "smallest acceptance margin: " + nbm::shortest_decimal(r.margins.smallest_acceptance_margin) + "\n" +
                       "largest rejection margin: " + nbm::shortest_decimal(r.margins.largest_rejection_margin) + "\n";
    emit(cfg, j, text);
    return 0;
}

int cmd_oracle(const RunConfig& cfg, const std::string& term, std::size_t grid) {
    const Loaded in = load(cfg);
    const nbm::PowerProduct t = nbm::parse_power_product(term, in.names);
    const nbm::NbmResult result = nbm::run_nbm(in.points, in.ordering, options_for(cfg));
    const nbm::OrderIdeal before = ideal_before(result.order_ideal, t);
    const nbm::OracleResult r = nbm::dependence_oracle(in.points, before, t, grid);
    Json j = {{"term", nbm::to_string(t, in.names)},
              {"order_ideal", nbm::format_terms(before.terms(), in.names)},
              {"minimum_residual", r.minimum_residual},
              {"evaluations", r.evaluations}};
    const std::string text = "t = " + nbm::to_string(t, in.names) + " against O = " +
                             nbm::format_terms(before.terms(), in.names) + "\n" +
                             "minimum residual: " + nbm::shortest_decimal(r.minimum_residual) + "\n" +
                             "evaluations: " + std::to_string(r.evaluations) + "\n";
    emit(cfg, j, text);
    return 0;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("input", cfg.input_path, "CSV or JSON point file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--tol", cfg.tolerance, "tolerance: one value or one per coordinate");
    cmd->add_option("--order", cfg.ordering, "term ordering, e.g. deglex:x,y or lex:y,x");
    cmd->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--digits", cfg.digits, "decimals shown in text output")->check(CLI::Range(1, 17));
    cmd->add_option("--seed", cfg.seed);
    cmd->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
    cmd->add_flag("--step-log", cfg.step_log, "include every candidate decision");
    cmd->add_option("--well-separated", cfg.well_separated)->check(CLI::IsMember({"warn", "error"}));
    cmd->add_flag("--unit-box-rescale", cfg.unit_box_rescale,
                  "rescale into [-1,1]^n with a power-of-two scaling and exact translation");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical Buchberger-Moeller: order ideals and almost vanishing polynomials"};
    app.require_subcommand(1);

    RunConfig cfg;
    VerifyFlags vflags;
    std::string term;
    std::size_t grid = 9;

    auto* compute = app.add_subcommand("compute", "run NBM and print O and G");
    auto* exact = app.add_subcommand("exact", "exact Buchberger-Moeller in rational arithmetic");
    auto* verify = app.add_subcommand("verify", "invariance and P1/P2/P3 checks");
    auto* stability = app.add_subcommand("stability", "Monte-Carlo stability report for O");
    auto* oracle = app.add_subcommand("oracle", "brute-force dependence search for one term");
    for (auto* cmd : {compute, exact, verify, stability, oracle}) add_common(cmd, cfg);

    verify->add_flag("--all", vflags.all, "run every check (default)");
    verify->add_flag("--scaling", vflags.scaling);
    verify->add_flag("--translation", vflags.translation);
    verify->add_flag("--p1", vflags.p1);
    verify->add_flag("--p3", vflags.p3);
    verify->add_option("--zero-set", vflags.zero_set, "claimed zero set for P2")->check(CLI::ExistingFile);
    verify->add_option("--runs", vflags.count, "random scalings and translations")->check(CLI::PositiveNumber);
    oracle->add_option("--term", term, "candidate power product")->required();
    oracle->add_option("--grid", grid, "grid points per perturbed coordinate")->check(CLI::Range(1, 101));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*compute) return cmd_compute(cfg);
        if (*exact) return cmd_exact(cfg);
        if (*verify) return cmd_verify(cfg, vflags);
        if (*stability) return cmd_stability(cfg);
        if (*oracle) return cmd_oracle(cfg, term, grid);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
