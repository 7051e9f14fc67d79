#include "comsim/bundles.hpp"

namespace comsim::bundles {

namespace {

constexpr std::string_view kCommon = R"([params]
omega_b_thz_over_2pi = 30
kappa_c_thz_over_2pi = 15
gamma_thz_over_2pi = 0.01
n_bar = 0.01
)";

std::string single(std::string_view extra_params, std::string_view sweep) {
    std::string s = "[model]\ntopology = single_wgm\n\n";
    s += kCommon;
    s += extra_params;
    s += "\n[sweep]\n";
    s += sweep;
    return s;
}

std::vector<Bundle> make() {
    std::vector<Bundle> b;
    b.push_back({"fig2a", "E_N(a|b), E_N(c|b) versus delta/omega_b for J/2pi = 0 and 0.7 THz, delta_a = delta_c",
                 single("kappa_a_thz_over_2pi = 1e-4\nG_thz_over_2pi = 0.7\n",
                        "mode = grid\n"
                        "axis1 = J_thz_over_2pi 0 0.7 2 linear\n"
                        "axis2 = delta_c_over_omega_b -3 1 801 linear\n"
                        "outputs = EN\n"
                        "delta_a_follows_delta_c = true\n")});
    const std::string jg_grid = "axis1 = J_thz_over_2pi 0 1.5 61 linear\n"
                                "axis2 = G_thz_over_2pi 0.05 2 40 linear\n";
    const std::string at_stokes = "kappa_a_thz_over_2pi = 1e-4\n"
                                  "delta_a_over_omega_b = -1\n"
                                  "delta_c_over_omega_b = -1\n";
    b.push_back({"fig2d", "E_N(c|b) over (J, G) at delta_a = delta_c = -omega_b",
                 single(at_stokes, "mode = grid\n" + jg_grid + "outputs = EN\n")});
    b.push_back({"fig2e", "E_N(a|b) over (J, G) at delta_a = delta_c = -omega_b",
                 single(at_stokes, "mode = grid\n" + jg_grid + "outputs = EN\n")});
    b.push_back({"fig3a", "E_N(a|b) versus G for J/2pi = 0.5, 1.0, 1.5 THz",
                 single(at_stokes, "mode = grid\n"
                                   "axis1 = J_thz_over_2pi 0.5 1.5 3 linear\n"
                                   "axis2 = G_thz_over_2pi 0.01 2 200 linear\n"
                                   "outputs = EN\n")});
    b.push_back({"fig3b", "E_N(a|b) versus J for G/2pi = 1.0, 1.5, 2.0 THz",
                 single(at_stokes, "mode = grid\n"
                                   "axis1 = G_thz_over_2pi 1 2 3 linear\n"
                                   "axis2 = J_thz_over_2pi 0.01 1.5 150 linear\n"
                                   "outputs = EN\n")});
    const std::string trace = "mode = trace\n"
                              "axis1 = J_thz_over_2pi 0.1 1.5 29 linear\n"
                              "axis2 = G_thz_over_2pi 0.1 2 40 linear\n"
                              "target = a|b\n"
                              "trace_both = true\n";
    b.push_back({"fig3c", "local maximum of E_N(a|b) versus J tuning G, and versus G tuning J",
                 single(at_stokes, trace)});
    b.push_back({"fig4a", "N_b from the covariance matrix and E_N(a|b) over (J, G)",
                 single(at_stokes, "mode = grid\n" + jg_grid + "outputs = EN N_b_cm\n")});
    b.push_back({"fig4b", "local maximum of E_N(a|b) with the phonon number at the maximum",
                 single(at_stokes, trace)});
    b.push_back({"figS2d", "N_b from the covariance matrix, point formula and Lorentzian integral versus J",
                 single("G_thz_over_2pi = 0.7\n"
                        "delta_a_over_omega_b = -1\n"
                        "delta_c_over_omega_b = -1\n",
                        "mode = grid\n"
                        "axis1 = kappa_a_thz_over_2pi 1e-4 0.1 2 log\n"
                        "axis2 = J_thz_over_2pi 0.1 1.5 57 linear\n"
                        "outputs = N_b_cm N_b_pert N_b_pert_lorentz\n")});

    std::string two = "[model]\ntopology = two_wgm\n\n";
    two += kCommon;
    two += "kappa_a_thz_over_2pi = 1e-3\n"
           "delta_a_over_omega_b = -1\n"
           "delta_a2_over_omega_b = 1\n"
           "delta_c_over_omega_b = 0\n"
           "\n[sweep]\n"
           "mode = grid\n"
           "axis1 = J_thz_over_2pi 0.05 2 40 linear\n"
           "axis2 = G_thz_over_2pi 0.05 2 40 linear\n"
           "outputs = EN duan duan_opt\n";
    b.push_back({"figS3a", "E_N(a1|a2) over (J = J1 = J2, G) for the two-resonator scheme", two});

    std::string deg = "[model]\ntopology = degenerate_pair\n\n";
    deg += kCommon;
    deg += "kappa_a_thz_over_2pi = 1e-3\n"
           "delta_a_over_omega_b = -1\n"
           "delta_c_over_omega_b = -1\n"
           "\n[sweep]\n"
           "mode = grid\n" +
           jg_grid + "outputs = EN\n";
    b.push_back({"figS6", "E_N(a|b) over (J, G) with counter-propagating degenerate modes", deg});
    return b;
}

}  // namespace

const std::vector<Bundle>& all() {
    static const std::vector<Bundle> bundles = make();
    return bundles;
}

std::optional<Bundle> find(std::string_view name) {
    for (const auto& b : all()) {
        if (b.name == name) return b;
    }
    return std::nullopt;
}

}  // namespace comsim::bundles
