// Command-line front end for the relukit shared library. Subcommands:
//   build   construct a network from a target spec and write it as JSON
//   eval    evaluate a network JSON file at a point
//   sweep   build a target across several accuracies and report a CSV
//   encode  simplify + serialize a network into the .nnc container
//   decode  reconstruct a network JSON file from a .nnc container
//   pieces  count affine pieces along random slices vs the theoretical bound

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relukit.h"

namespace {

struct NetHandle {
    rk_network* ptr = nullptr;
    ~NetHandle() { rk_network_free(ptr); }
};

[[noreturn]] void die(const std::string& msg) {
    std::fprintf(stderr, "error: %s\n", msg.c_str());
    std::exit(1);
}

void check(rk_status status) {
    if (status != RK_OK) die(rk_last_error());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) die("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void check_eps(double eps) {
    if (!(eps > 0.0) || !(eps < 0.5)) die("eps must be in (0, 0.5)");
}

std::vector<double> parse_numbers(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            die("cannot parse number '" + item + "'");
        }
    }
    if (out.empty()) die("empty number list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"explicit ReLU network construction and probing"};
    app.require_subcommand(1);

    std::string target_file, net_file, out_file, point_text, eps_list_text;
    double eps = 0.1, p = 2.0;
    long long resolution = 100000;
    long long num_slices = 10;
    std::uint64_t seed = 1;
    double tol = 1e-6;
    unsigned M = 0, K = 0;

    CLI::App* build = app.add_subcommand("build", "construct a network from a target spec");
    build->add_option("--target", target_file, "target spec JSON file")->required();
    build->add_option("--eps", eps, "accuracy in (0, 0.5)")->required();
    build->add_option("--p", p, "L^p exponent (default 2)");
    build->add_option("--out", out_file, "output network JSON file")->required();

    CLI::App* eval = app.add_subcommand("eval", "evaluate a network at a point");
    eval->add_option("--net", net_file, "network JSON file")->required();
    eval->add_option("--point", point_text, "comma-separated coordinates")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "accuracy sweep with a CSV report");
    sweep->add_option("--target", target_file, "target spec JSON file")->required();
    sweep->add_option("--eps-list", eps_list_text, "comma-separated accuracies (>= 3)")
        ->required();
    sweep->add_option("--p", p, "L^p exponent (default 2)");
    sweep->add_option("--resolution", resolution, "error-measurement sample budget");
    sweep->add_option("--seed", seed, "sampling seed");
    sweep->add_option("--out", out_file, "CSV output file (default stdout)");

    CLI::App* encode = app.add_subcommand("encode", "simplify and serialize to .nnc");
    encode->add_option("--net", net_file, "network JSON file")->required();
    encode->add_option("--out", out_file, "output .nnc file")->required();
    encode->add_option("--M", M, "weight budget (>= weight count)")->required();
    encode->add_option("--K", K, "bits per weight")->required();

    CLI::App* decode = app.add_subcommand("decode", "reconstruct a network from .nnc");
    decode->add_option("--nnc", net_file, "input .nnc file")->required();
    decode->add_option("--out", out_file, "output network JSON file")->required();

    CLI::App* pieces = app.add_subcommand("pieces", "affine piece counts along random slices");
    pieces->add_option("--net", net_file, "network JSON file")->required();
    pieces->add_option("--slices", num_slices, "number of random slices");
    pieces->add_option("--seed", seed, "slice sampling seed");
    pieces->add_option("--resolution", resolution, "samples per slice");
    pieces->add_option("--tol", tol, "slope-change detection tolerance");

    CLI11_PARSE(app, argc, argv);

    if (build->parsed()) {
        check_eps(eps);
        std::string spec = read_file(target_file);
        NetHandle net;
        int quant_s = 0;
        check(rk_build_target(spec.c_str(), eps, p, &net.ptr, &quant_s));
        check(rk_network_save(net.ptr, out_file.c_str()));
        std::printf("depth=%zu M=%zu N=%zu s=%d\n", rk_network_depth(net.ptr),
                    rk_network_num_weights(net.ptr), rk_network_num_neurons(net.ptr), quant_s);
        return 0;
    }

    if (eval->parsed()) {
        NetHandle net;
        check(rk_network_load(net_file.c_str(), &net.ptr));
        std::vector<double> x = parse_numbers(point_text);
        if (x.size() != rk_network_input_dim(net.ptr))
            die("dimension mismatch: point has " + std::to_string(x.size()) +
                " coordinates, network expects " +
                std::to_string(rk_network_input_dim(net.ptr)));
        std::vector<double> y(rk_network_output_dim(net.ptr));
        check(rk_network_eval(net.ptr, x.data(), x.size(), y.data(), y.size()));
        for (std::size_t i = 0; i < y.size(); ++i)
            std::printf("%s%.17g", i == 0 ? "" : " ", y[i]);
        std::printf("\n");
        return 0;
    }

    if (sweep->parsed()) {
        std::vector<double> eps_values = parse_numbers(eps_list_text);
        if (eps_values.size() < 3) die("need >=3 points");
        for (double e : eps_values) check_eps(e);
        std::string spec = read_file(target_file);
        double rate = 0.0;
        check(rk_target_rate(spec.c_str(), p, &rate));

        std::ostringstream csv;
        csv << "target_name,eps,p,depth,M,N,measured_error,theoretical_rate,fitted_slope\n";
        std::vector<double> ms;
        for (double e : eps_values) {
            NetHandle net;
            check(rk_build_target(spec.c_str(), e, p, &net.ptr, nullptr));
            double err = 0.0;
            check(rk_target_error(spec.c_str(), net.ptr, p, resolution, seed, &err));
            ms.push_back(static_cast<double>(rk_network_num_weights(net.ptr)));
            csv << target_file << "," << e << "," << p << "," << rk_network_depth(net.ptr) << ","
                << rk_network_num_weights(net.ptr) << "," << rk_network_num_neurons(net.ptr)
                << "," << err << "," << rate << ",\n";
        }
        double slope = 0.0;
        check(rk_rate_fit(eps_values.data(), ms.data(), ms.size(), &slope));
        csv << target_file << ",,,,,,,," << slope << "\n";
        if (out_file.empty()) {
            std::fputs(csv.str().c_str(), stdout);
        } else {
            std::ofstream out(out_file);
            if (!out) die("cannot open " + out_file);
            out << csv.str();
        }
        return 0;
    }

    if (encode->parsed()) {
        NetHandle net;
        check(rk_network_load(net_file.c_str(), &net.ptr));
        std::uint64_t bits = 0;
        check(rk_encode_file(net.ptr, out_file.c_str(), M, K, &bits));
        std::printf("bits=%" PRIu64 "\n", bits);
        return 0;
    }

    if (decode->parsed()) {
        NetHandle net;
        check(rk_decode_file(net_file.c_str(), &net.ptr));
        check(rk_network_save(net.ptr, out_file.c_str()));
        std::printf("depth=%zu M=%zu N=%zu\n", rk_network_depth(net.ptr),
                    rk_network_num_weights(net.ptr), rk_network_num_neurons(net.ptr));
        return 0;
    }

    if (pieces->parsed()) {
        NetHandle net;
        check(rk_network_load(net_file.c_str(), &net.ptr));
        if (rk_network_output_dim(net.ptr) != 1) die("pieces: network must have scalar output");
        const std::size_t d = rk_network_input_dim(net.ptr);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uni(-0.5, 0.5);
        long long worst = 0;
        for (long long s = 0; s < num_slices; ++s) {
            std::vector<double> x0(d), v(d);
            double norm = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                x0[i] = uni(rng);
                v[i] = uni(rng);
                norm += v[i] * v[i];
            }
            if (norm == 0.0) v[0] = 1.0;
            long long count = 0;
            check(rk_count_slice_pieces(net.ptr, x0.data(), v.data(), -1.0, 1.0,
                                        std::max<long long>(resolution, 64), tol, &count));
            worst = std::max(worst, count);
        }
        double bound = 0.0;
        check(rk_piece_bound(net.ptr, &bound));
        std::printf("max_pieces=%lld bound=%.17g\n", worst, bound);
        return 0;
    }

    return 0;
}
