#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "stbicm/analysis.hpp"
#include "stbicm/channel.hpp"
#include "stbicm/codec.hpp"
#include "stbicm/harness.hpp"
#include "stbicm/modem.hpp"
#include "stbicm/precode.hpp"

using namespace stbicm;

namespace {

std::vector<double> parse_grid(const std::string& spec) {
    // "a:b:step" inclusive grid, or a single value
    double a, b, st;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &a, &b, &st) == 3) {
        if (st <= 0.0 || b < a) throw config_error("bad grid " + spec);
        std::vector<double> g;
        for (double v = a; v <= b + 1e-9; v += st) g.push_back(v);
        return g;
    }
    if (std::sscanf(spec.c_str(), "%lf", &a) == 1) return {a};
    throw config_error("bad grid " + spec);
}

double parse_rate(const std::string& spec) {
    int num, den;
    if (std::sscanf(spec.c_str(), "%d/%d", &num, &den) == 2 && den > 0)
        return static_cast<double>(num) / den;
    double v;
    if (std::sscanf(spec.c_str(), "%lf", &v) == 1) return v;
    throw config_error("bad rate " + spec);
}

void cmd_singleton(double rc, int nr, int nc, int nt_max, bool csv) {
    if (!csv) {
        std::printf("# diversity bound, R_C=%.4g n_r=%d n_c=%d"
                    " (columns: s; * marks full diversity)\n", rc, nr, nc);
        std::printf("%4s", "n_t");
        for (int s = 1; s <= nt_max * nc; ++s) std::printf("%7s%d", "s=", s);
        std::printf("\n");
    } else {
        std::printf("n_t,s,diversity,full\n");
    }
    for (int nt = 1; nt <= nt_max; ++nt) {
        if (!csv) std::printf("%4d", nt);
        for (int s = 1; s <= nt_max * nc; ++s) {
            if (s > nt * nc || (nt * nc) % s != 0) {
                if (!csv) std::printf("%8s", "-");
                continue;
            }
            const int d = singleton_diversity(rc, nt, nc, nr, s);
            const bool full = d == nt * nc * nr;
            if (csv)
                std::printf("%d,%d,%d,%d\n", nt, s, d, full ? 1 : 0);
            else
                std::printf("%7d%c", d, full ? '*' : ' ');
        }
        if (!csv) std::printf("\n");
    }
}

void cmd_gain_table(int nt_max, int w_max, bool csv) {
    if (csv) {
        std::printf("n_t,w,gain_db\n");
    } else {
        std::printf("# best precoding gain (dB)\n%4s", "n_t");
        for (int w = 1; w <= w_max; ++w) std::printf("%7s%d", "w=", w);
        std::printf("\n");
    }
    for (int nt = 1; nt <= nt_max; ++nt) {
        if (!csv) std::printf("%4d", nt);
        for (int w = 1; w <= w_max; ++w) {
            if (w < nt) {
                if (!csv) std::printf("%8s", "");
                continue;
            }
            double g = spreading_gain_db(nt, w);
            if (std::abs(g) < 5e-3) g = 0.0; // avoid "-0.00"
            if (csv)
                std::printf("%d,%d,%.2f\n", nt, w, g);
            else
                std::printf("%8.2f", g);
        }
        if (!csv) std::printf("\n");
    }
}

int checked_main(int argc, char** argv) {
    CLI::App app{"space-time BICM simulation and analysis toolkit"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo FER/BER simulation");
    std::string cfg_path, grid_spec = "0:10:2", out_path = "results.csv";
    std::string format = "csv";
    uint64_t max_frames = 1'000'000, target_errors = 100;
    sim->add_option("-c,--config", cfg_path, "JSON system config")->required();
    sim->add_option("--ebn0", grid_spec, "Eb/N0 grid a:b:step in dB");
    sim->add_option("--out", out_path, "output path");
    sim->add_option("--format", format, "csv or json");
    sim->add_option("--max-frames", max_frames, "frame cap per grid point");
    sim->add_option("--target-errors", target_errors, "frame errors to stop at");

    // singleton
    auto* sing = app.add_subcommand("singleton", "diversity bound table");
    std::string rc_spec = "1/2";
    int nr = 1, nc = 1, nt_max = 8;
    bool csv = false;
    sing->add_option("--rc", rc_spec, "code rate (e.g. 1/2)");
    sing->add_option("--nr", nr, "receive antennas");
    sing->add_option("--nc", nc, "fading blocks");
    sing->add_option("--nt-max", nt_max, "max transmit antennas");
    sing->add_flag("--csv", csv, "CSV output");

    // gain-table
    auto* gt = app.add_subcommand("gain-table", "best precoding gain table (dB)");
    int gt_nt_max = 8, w_max = 8;
    bool gt_csv = false;
    gt->add_option("--nt-max", gt_nt_max, "max transmit antennas");
    gt->add_option("--w-max", w_max, "max Hamming weight");
    gt->add_flag("--csv", gt_csv, "CSV output");

    // pep
    auto* pep = app.add_subcommand("pep", "exact pairwise error probability curve");
    std::string pep_cfg;
    std::string pep_grid = "0:20:2";
    int pep_w = 3, pep_nr = 1, pep_m = 1;
    pep->add_option("-c,--config", pep_cfg, "JSON system config (m, n_r, rate source)");
    pep->add_option("--ebn0", pep_grid, "Eb/N0 grid a:b:step in dB");
    pep->add_option("-w,--weight", pep_w, "error event Hamming weight");
    pep->add_option("--nr", pep_nr, "receive antennas (without config)");
    pep->add_option("-m", pep_m, "bits per symbol (without config)");

    // precoder
    auto* prec = app.add_subcommand("precoder", "emit or check a precoder matrix");
    prec->require_subcommand(1);
    int p_nt = 2, p_ns = 1, p_s = 2;
    std::string p_out = "precoder.txt";
    auto* emit = prec->add_subcommand("emit", "build and save");
    auto* check = prec->add_subcommand("check", "build and validate");
    for (auto* sc : {emit, check}) {
        sc->add_option("--nt", p_nt, "transmit antennas");
        sc->add_option("--ns", p_ns, "fading realizations per period");
        sc->add_option("--s", p_s, "spreading factor");
    }
    emit->add_option("--out", p_out, "output path");

    // outage
    auto* outg = app.add_subcommand("outage", "Gaussian-input outage probability");
    int o_nt = 2, o_nr = 1, o_nc = 1, o_draws = 100'000;
    std::string o_rate = "2", o_grid = "0:20:2";
    uint64_t o_seed = 1;
    outg->add_option("--nt", o_nt, "transmit antennas");
    outg->add_option("--nr", o_nr, "receive antennas");
    outg->add_option("--nc", o_nc, "fading blocks");
    outg->add_option("--rate", o_rate, "rate in bits per channel use");
    outg->add_option("--snr", o_grid, "SNR grid a:b:step in dB");
    outg->add_option("--draws", o_draws, "Monte Carlo draws per point");
    outg->add_option("--seed", o_seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int r = app.exit(e);
        return r == 0 ? 0 : 2; // usage problems are config errors
    }

    if (sim->parsed()) {
        SystemConfig cfg = load_config(cfg_path);
        cfg.validate();
        StopRule stop{target_errors, max_frames};
        auto recs = run_fer(cfg, parse_grid(grid_spec), stop);
        emit_results(recs, cfg, out_path, format);
        std::printf("wrote %zu records to %s\n", recs.size(), out_path.c_str());
    } else if (sing->parsed()) {
        cmd_singleton(parse_rate(rc_spec), nr, nc, nt_max, csv);
    } else if (gt->parsed()) {
        cmd_gain_table(gt_nt_max, w_max, gt_csv);
    } else if (pep->parsed()) {
        int m = pep_m, n_r = pep_nr;
        double rate = 0.5;
        if (!pep_cfg.empty()) {
            SystemConfig cfg = load_config(pep_cfg);
            m = cfg.m;
            n_r = cfg.n_r;
            rate = cfg.code_rate();
        }
        const auto cst = Constellation::make(m);
        const auto dset = bsk_distances(cst);
        std::vector<double> d2;
        for (double d : dset.all) d2.push_back(d * d);
        std::printf("ebn0_db,pep\n");
        Rng rng(7);
        for (double db : parse_grid(pep_grid)) {
            const double n0 = ebn0_to_n0(db, m, rate, n_r);
            const double p = expected_pep_ergodic(pep_w, d2, n_r, n0, 2000, rng);
            std::printf("%.6g,%.6g\n", db, p);
        }
    } else if (prec->parsed()) {
        const Precoder p = build_precoder(p_nt, p_ns, p_s);
        const auto chk = validate_precoder(p);
        if (emit->parsed()) {
            save_precoder(p, p_out);
            std::printf("wrote %dx%d precoder to %s\n", p.dim(), p.dim(), p_out.c_str());
        }
        std::printf("unit_rows=%d group_orthogonal=%d frobenius=%d"
                    " max_row_err=%.3g max_cross=%.3g\n",
                    chk.unit_rows, chk.group_orthogonal, chk.unit_frobenius,
                    chk.max_row_norm_err, chk.max_group_dot);
        if (!chk.ok()) throw config_error("precoder validation failed");
    } else if (outg->parsed()) {
        Rng rng(o_seed);
        const auto grid = parse_grid(o_grid);
        const auto curve =
            outage_gaussian(o_nt, o_nr, o_nc, parse_rate(o_rate), grid, o_draws, rng);
        std::printf("snr_db,outage\n");
        for (size_t i = 0; i < grid.size(); ++i)
            std::printf("%.6g,%.6g\n", grid[i], curve[i]);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return checked_main(argc, argv);
    } catch (const resource_error& e) {
        std::cerr << "resource error: " << e.what() << '\n';
        return 3;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
