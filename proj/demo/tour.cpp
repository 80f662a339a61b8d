// A short tour of the library: normalize a cubic, classify it, estimate its
// entropy, check a tabulated center and render a small picture.

#include <cstdio>
#include <iostream>

#include "cubicmaps/cubicmaps.hpp"

using namespace cubicmaps;

int main() {
    // 2x^3 - 3x^2 + 1, an arbitrary real cubic
    const auto [moduli, form] = normalize(general_cubic{2.0, -3.0, 0.0, 1.0});
    std::printf("normal form: sigma=%d A=%.6f b=%.6f  (A, B) = (%.6f, %.6f)\n", form.sigma, form.A.real(),
                form.b.real(), moduli.A.real(), moduli.B.real());

    for (auto [A, B] : {std::pair{0.0, 0.0}, {0.5, 0.1}, {2.0, 0.0}}) {
        std::cout << "classify " << A << ", " << B << ": " << json_text(classification_report(A, B, 0), -1);
    }

    const entropy_estimate e = estimate_entropy(monic_form::from_moduli(.71327, .12977));
    std::printf("growth number at (.71327, .12977): s = %.5f after %d iterates\n", e.s, e.k);

    for (const auto& rec : builtin_center_table()) {
        const refinement r = refine_record(rec);
        std::printf("%-9s table (%9.5f, %9.5f)  refined (%.10f, %.10f)\n", rec.label.c_str(), rec.A, rec.B, r.A, r.B);
    }

    raster_config cfg;
    cfg.win = {-1.2, 1.2, -1.85, 0.75};
    cfg.width = 72;
    cfg.height = 56;
    const raster_image img = render(cfg);
    const char* ramp = " .:-=+*#%@";
    for (int j = 0; j < img.height; j += 2) {
        for (int i = 0; i < img.width; ++i) std::cout << ramp[9 - img.pixels[j * img.width + i] * 9 / 255];
        std::cout << "\n";
    }
}
