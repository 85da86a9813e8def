// Batch runner: every subcommand emits one JSON report (optionally prettied),
// fully determined by the flags and the seed apart from the timings block.

#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "schur/grouporacle.hpp"
#include "schur/parallel.hpp"
#include "schur/report.hpp"

using namespace schur;
using nlohmann::ordered_json;

namespace {

struct RunConfig {
    std::string command;
    int64_t q = 3;
    std::string jordan;    // "2:0,1:1"
    std::string charpoly;  // "t^2+2" or "2,0,1"
    std::string matrix_file;
    std::string rho = "all";  // all | diagonal | c0,c1,...
    std::string ring = "both";
    uint64_t seed = 0;
    int threads = 0;
    std::string out;
    bool pretty = false;
    bool full = false;
    bool witnesses = false;

    ordered_json to_json() const {
        ordered_json j;
        j["command"] = command;
        j["q"] = q;
        if (!jordan.empty()) j["jordan"] = jordan;
        if (!charpoly.empty()) j["charpoly"] = charpoly;
        if (!matrix_file.empty()) j["matrix_file"] = matrix_file;
        j["rho"] = rho;
        j["ring"] = ring;
        j["seed"] = seed;
        j["threads"] = threads > 0 ? threads : max_threads();
        return j;
    }
};

std::pair<int64_t, int> factor_prime_power(int64_t q) {
    for (int64_t p = 2; p * p <= q; ++p) {
        if (q % p) continue;
        int f = 0;
        int64_t t = q;
        while (t % p == 0) {
            t /= p;
            ++f;
        }
        require(t == 1, Errc::ConfigError, "q must be a prime power");
        return {p, f};
    }
    return {q, 1};
}

Poly parse_charpoly(const FiniteField& F, const std::string& s) {
    if (s.find('t') == std::string::npos) {
        // comma separated coefficients, constant first
        Poly out;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(F.from_int(std::stoll(tok)));
        return poly_trim(std::move(out));
    }
    // symbolic: terms split on +/-
    Poly out;
    auto put = [&](int64_t coef, int deg) {
        if ((int)out.size() <= deg) out.resize(deg + 1, 0);
        out[deg] = F.add(out[deg], F.from_int(coef));
    };
    size_t i = 0;
    int sign = 1;
    while (i < s.size()) {
        if (s[i] == '+') {
            sign = 1;
            ++i;
            continue;
        }
        if (s[i] == '-') {
            sign = -1;
            ++i;
            continue;
        }
        if (isspace((unsigned char)s[i])) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
        std::string term = s.substr(i, j - i);
        i = j;
        int64_t coef = 1;
        int deg = 0;
        size_t tpos = term.find('t');
        if (tpos == std::string::npos) {
            coef = std::stoll(term);
        } else {
            std::string cs = term.substr(0, tpos);
            while (!cs.empty() && (cs.back() == '*' || isspace((unsigned char)cs.back())))
                cs.pop_back();
            if (!cs.empty()) coef = std::stoll(cs);
            size_t caret = term.find('^', tpos);
            deg = caret == std::string::npos ? 1 : std::stoi(term.substr(caret + 1));
        }
        put(sign * coef, deg);
        sign = 1;
    }
    return poly_trim(std::move(out));
}

RegularMatrix build_beta(const FiniteField& F, const RunConfig& cfg) {
    int sources = (!cfg.jordan.empty()) + (!cfg.charpoly.empty()) + (!cfg.matrix_file.empty());
    require(sources == 1, Errc::ConfigError,
            "give exactly one of --jordan, --charpoly, --matrix-file");
    if (!cfg.jordan.empty()) {
        std::vector<std::pair<FFElem, int>> blocks;
        std::stringstream ss(cfg.jordan);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            auto colon = tok.find(':');
            require(colon != std::string::npos, Errc::ConfigError,
                    "jordan blocks look like size:eigenvalue");
            int size = std::stoi(tok.substr(0, colon));
            FFElem eig = F.from_int(std::stoll(tok.substr(colon + 1)));
            require(size >= 1, Errc::ConfigError, "block size must be positive");
            blocks.push_back({eig, size});
        }
        return RegularMatrix::jordan(F, blocks);
    }
    if (!cfg.charpoly.empty()) {
        Poly f = parse_charpoly(F, cfg.charpoly);
        require(poly_deg(f) >= 1, Errc::ConfigError, "charpoly must have positive degree");
        return RegularMatrix::companion(F, poly_monic(F, f));
    }
    std::ifstream in(cfg.matrix_file);
    require(in.good(), Errc::ConfigError, "cannot open matrix file");
    int n;
    in >> n;
    require(n >= 1 && n <= 6, Errc::ConfigError, "matrix size out of range");
    MatrixF m(F, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int64_t v;
            require((bool)(in >> v), Errc::ConfigError, "matrix file too short");
            m.at(i, j) = F.from_int(v);
        }
    return RegularMatrix::from_matrix(std::move(m));
}

std::vector<AdditiveCharacterRho> select_rhos(const CentralizerAlgebra& C,
                                              const RunConfig& cfg) {
    const FiniteField& F = C.field();
    if (cfg.rho == "all") return AdditiveCharacterRho::enumerate(C);
    if (cfg.rho == "diagonal") {
        // blockwise-scalar A matrices
        std::vector<AdditiveCharacterRho> out;
        for (FFElem a = 0; a < F.q(); ++a)
            out.push_back(AdditiveCharacterRho::transpose_form(C, C.scalar(a)));
        return out;
    }
    // explicit coefficients: nilpotent-basis coefficients for a single Jordan
    // block, power-basis coefficients otherwise
    std::vector<FFElem> coeffs;
    std::stringstream ss(cfg.rho);
    std::string tok;
    while (std::getline(ss, tok, ',')) coeffs.push_back(F.from_int(std::stoll(tok)));
    require((int)coeffs.size() == C.n(), Errc::ConfigError, "rho needs n coefficients");
    const RegularMatrix& rm = C.regular();
    CentralizerAlgebra::Elem A = C.zero();
    if (rm.jordan_blocks().size() == 1 && rm.split()) {
        // A = sum rho_k N^k, N = beta - a
        CentralizerAlgebra::Elem npow = C.one();
        CentralizerAlgebra::Elem nelt = C.sub(
            [&] {
                CentralizerAlgebra::Elem b = C.zero();
                b[1] = F.one();
                return b;
            }(),
            C.scalar(rm.beta().at(0, 0)));
        for (int k = 0; k < C.n(); ++k) {
            for (int i = 0; i < C.n(); ++i) A[i] = F.add(A[i], F.mul(coeffs[k], npow[i]));
            npow = C.mul(npow, nelt);
        }
        return {AdditiveCharacterRho::transpose_form(C, A)};
    }
    for (int i = 0; i < C.n(); ++i) A[i] = coeffs[i];
    return {AdditiveCharacterRho::trace_form(C, A)};
}

int write_report(const RunConfig& cfg, ordered_json&& body, double ms, int exit_code) {
    ordered_json j;
    j["config"] = cfg.to_json();
    j["version"] = kVersion;
    j["report"] = std::move(body);
    j["timings"] = {{"total_ms", ms}};
    std::string text = cfg.pretty ? render_pretty(j) : j.dump();
    if (cfg.out.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(cfg.out);
        out << text << "\n";
    }
    return exit_code;
}

int cmd_check_conjecture(const RunConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    auto [p, f] = factor_prime_power(cfg.q);
    FiniteField F(p, f);
    RegularMatrix rm = build_beta(F, cfg);
    SweepOptions opt;
    opt.want_witnesses = cfg.witnesses;
    SweepReport rep;
    if (cfg.rho == "all") {
        rep = conjecture_sweep(rm, opt);
    } else {
        // restricted sweep: run the listed characters only
        CentralizerAlgebra C(rm);
        auto rhos = select_rhos(C, cfg);
        SymplecticSpace sp = build_symplectic_space(rm);
        UnitGroup G = unit_group(C);
        rep.beta = rm.describe();
        rep.q = F.q();
        rep.n = rm.n();
        rep.rho_count = (int)rhos.size();
        rep.trivial_count = 0;
        if (sp.dim() == 0) {
            rep.trivial_count = rep.rho_count;
        } else {
            SchrodingerModel model(sp, default_polarization(sp));
            Cocycle2 ct = c_T_table(model, G);
            for (size_t i = 0; i < rhos.size(); ++i) {
                CBetaRho cbr(sp, G, rhos[i]);
                Cocycle2 comb = combined_cocycle(cbr, ct);
                if (is_trivial_class(comb)) {
                    ++rep.trivial_count;
                    if (cfg.witnesses)
                        rep.witnesses.push_back(solve_coboundary(comb).to_json());
                } else {
                    rep.counterexamples.push_back((int)i);
                }
            }
        }
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
    int code = rep.counterexamples.empty() ? 0 : 2;
    return write_report(cfg, ordered_json::parse(rep.to_json()), ms, code);
}

int cmd_oracle_compare(const RunConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    auto [p, f] = factor_prime_power(cfg.q);
    require(f == 1, Errc::ConfigError, "the oracle runs over prime fields");
    FiniteField F(p, 1);
    RegularMatrix rm = build_beta(F, cfg);
    require(rm.n() <= 3, Errc::ConfigError, "oracle is desk scale: n <= 3");
    std::vector<LocalRing::Kind> kinds;
    if (cfg.ring == "both") {
        kinds = {LocalRing::Kind::Unequal, LocalRing::Kind::Equal};
    } else if (cfg.ring == "padic") {
        kinds = {LocalRing::Kind::Unequal};
    } else if (cfg.ring == "series") {
        kinds = {LocalRing::Kind::Equal};
    } else {
        fail(Errc::ConfigError, "--ring must be padic, series, or both");
    }
    ordered_json body = ordered_json::array();
    bool all_match = true;
    for (auto kind : kinds) {
        auto rep = oracle_compare(kind, rm, cfg.seed);
        all_match = all_match && rep.mismatched_rho.empty();
        ordered_json r = ordered_json::parse(rep.to_json());
        r["matches_algebraic_class"] = rep.mismatched_rho.empty();
        body.push_back(std::move(r));
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
    return write_report(cfg, std::move(body), ms, all_match ? 0 : 3);
}

int cmd_orbits(const RunConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    auto [p, f] = factor_prime_power(cfg.q);
    require(f == 1, Errc::ConfigError, "the oracle runs over prime fields");
    FiniteField F(p, 1);
    RegularMatrix rm = build_beta(F, cfg);
    LocalRing::Kind kind =
        cfg.ring == "series" ? LocalRing::Kind::Equal : LocalRing::Kind::Unequal;
    GroupOracle oracle(kind, rm);
    auto census = oracle.orbit_census();
    ordered_json body;
    body["X"] = census.X_size;
    body["orbits"] = census.orbit_count;
    body["X0"] = census.X0_size;
    body["orbits_meeting_X0"] = census.orbits_meeting_X0;
    body["omega_T_distinct"] = census.omega_T_distinct;
    body["trace_criterion_ok"] = census.trace_criterion_ok;
    body["restriction_criterion_ok"] = census.restriction_criterion_ok;
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
    return write_report(cfg, std::move(body), ms, 0);
}

int cmd_weil_table(const RunConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    auto [p, f] = factor_prime_power(cfg.q);
    FiniteField F(p, f);
    ordered_json body;
    RootOfUnity g1 = F.weil_gamma1();
    const char* names[4] = {"1", "i", "-1", "-i"};
    body["gamma_1"] = names[g1.e % 4];
    ordered_json table = ordered_json::array();
    for (FFElem a = 1; a < F.q(); ++a) {
        RootOfUnity g = F.weil_constant_scalar(a);
        ordered_json row;
        row["a"] = a;
        row["legendre"] = F.legendre(a);
        row["gamma"] = names[g.e % 4];
        table.push_back(std::move(row));
    }
    body["table"] = std::move(table);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
    return write_report(cfg, std::move(body), ms, 0);
}

int cmd_witness(const RunConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    auto [p, f] = factor_prime_power(cfg.q);
    FiniteField F(p, f);
    RegularMatrix rm = build_beta(F, cfg);
    CentralizerAlgebra C(rm);
    UnitGroup G = unit_group(C);
    ordered_json body;
    body["beta"] = rm.describe();
    body["unit_count"] = G.order();
    bool single_jordan = rm.jordan_blocks().size() == 1 && rm.split();
    int64_t char_needed = rm.n() == 2 ? 3 : rm.n() == 3 ? 5 : 7;
    if (single_jordan && rm.n() >= 2 && rm.n() <= 4 && F.p() > char_needed &&
        cfg.rho != "all" && cfg.rho != "diagonal") {
        // closed-form split witness
        std::vector<FFElem> coeffs;
        std::stringstream ss(cfg.rho);
        std::string tok;
        while (std::getline(ss, tok, ',')) coeffs.push_back(F.from_int(std::stoll(tok)));
        require((int)coeffs.size() == rm.n(), Errc::ConfigError, "rho needs n coefficients");
        SplitWitness sw(C, coeffs);
        ordered_json deltas = ordered_json::array();
        for (int i = 0; i < G.order(); ++i) {
            RootOfUnity d = sw.delta(G.elems[i]);
            deltas.push_back(d.e);
        }
        body["kind"] = "split_closed_form";
        body["M"] = F.p();
        body["delta"] = std::move(deltas);
        // verification against the engine cocycle on the transpose complement
        SymplecticSpace sp = build_symplectic_space(rm, ComplementKind::TransposeOrtho);
        auto rho = select_rhos(C, cfg).at(0);
        CBetaRho cbr(sp, G, rho);
        bool ok = true;
        for (int i = 0; i < G.order() && ok; ++i)
            for (int j = 0; j < G.order() && ok; ++j) {
                RootOfUnity dd = sw.delta(G.elems[j])
                                     .times(sw.delta(G.elems[G.table.mul(i, j)]).inverse())
                                     .times(sw.delta(G.elems[i]));
                ok = cbr.value(i, j).equals(dd);
            }
        body["verified"] = ok;
    } else if (rm.n() == 2 && rm.irreducible() && rm.beta().at(0, 0) == 0 &&
               rm.beta().at(1, 1) == 0 && rm.beta().at(1, 0) == F.one()) {
        QuadraticCuspidal qc = quadratic_cuspidal(C);
        ordered_json deltas = ordered_json::array();
        for (int i = 0; i < G.order(); ++i) deltas.push_back(qc.delta(G.elems[i]).lifted(4).e);
        body["kind"] = "quadratic_closed_form";
        body["M"] = 4;
        body["delta"] = std::move(deltas);
        SymplecticSpace sp = build_symplectic_space(rm);
        SchrodingerModel model(sp, polarization_involution(sp));
        bool ok = true;
        for (int i = 0; i < G.order() && ok; ++i)
            for (int j = 0; j < G.order() && ok; ++j) {
                RootOfUnity dd = qc.delta(G.elems[j])
                                     .times(qc.delta(G.elems[G.table.mul(i, j)]).inverse())
                                     .times(qc.delta(G.elems[i]));
                ok = model.c_T(C, G.elems[i], G.elems[j]).equals(dd);
            }
        body["verified"] = ok;
    } else {
        // generic solver witness of the combined cocycle for the given rho
        SymplecticSpace sp = build_symplectic_space(rm);
        auto rhos = select_rhos(C, cfg);
        require(rhos.size() == 1, Errc::ConfigError,
                "generic witness needs a single rho (give coefficients)");
        SchrodingerModel model(sp, default_polarization(sp));
        Cocycle2 ct = c_T_table(model, G);
        CBetaRho cbr(sp, G, rhos[0]);
        Cocycle2 comb = combined_cocycle(cbr, ct);
        require(is_trivial_class(comb), Errc::NotTrivialClass,
                "class is nontrivial: no witness exists");
        auto w = solve_coboundary(comb);
        body["kind"] = "solver";
        body["witness"] = ordered_json::parse(w.to_json());
        body["verified"] = witness_matches(comb, w);
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
    return write_report(cfg, std::move(body), ms, 0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Schur-multiplier cocycles over finite fields"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--q", cfg.q, "field size (prime power, odd characteristic)");
        sub->add_option("--jordan", cfg.jordan, "jordan blocks, e.g. 2:0,1:1");
        sub->add_option("--charpoly", cfg.charpoly, "characteristic polynomial, e.g. t^2+2");
        sub->add_option("--matrix-file", cfg.matrix_file, "explicit matrix file");
        sub->add_option("--rho", cfg.rho, "all | diagonal | c0,c1,...");
        sub->add_option("--ring", cfg.ring, "padic | series | both");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--threads,-j", cfg.threads, "worker threads (or SCHUR_THREADS)");
        sub->add_option("--out", cfg.out, "write the JSON report to a file");
        sub->add_flag("--pretty", cfg.pretty, "human-readable rendering");
        sub->add_flag("--full", cfg.full, "run optional exhaustive scans");
        sub->add_flag("--witnesses", cfg.witnesses, "emit coboundary witnesses");
    };
    auto* c1 = app.add_subcommand("check-conjecture", "sweep all characters for triviality");
    auto* c2 = app.add_subcommand("oracle-compare", "master identity against GL_n(O_3)");
    auto* c3 = app.add_subcommand("orbits", "orbit census of X(psi_beta)");
    auto* c4 = app.add_subcommand("weil-table", "Weil constants of the field");
    auto* c5 = app.add_subcommand("witness", "coboundary witnesses");
    for (auto* s : {c1, c2, c3, c4, c5}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 64;
    }

    try {
        if (cfg.threads > 0) set_threads(cfg.threads);
        if (c1->parsed()) {
            cfg.command = "check-conjecture";
            return cmd_check_conjecture(cfg);
        }
        if (c2->parsed()) {
            cfg.command = "oracle-compare";
            return cmd_oracle_compare(cfg);
        }
        if (c3->parsed()) {
            cfg.command = "orbits";
            return cmd_orbits(cfg);
        }
        if (c4->parsed()) {
            cfg.command = "weil-table";
            return cmd_weil_table(cfg);
        }
        if (c5->parsed()) {
            cfg.command = "witness";
            return cmd_witness(cfg);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code == Errc::ConfigError || e.code == Errc::DuplicateEigenvalue ||
                       e.code == Errc::OddCharRequired || e.code == Errc::WrongShape ||
                       e.code == Errc::CharTooSmall
                   ? 64
                   : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 64;  // malformed numeric arguments land here via stoll/stoi
    }
    return 1;
}
