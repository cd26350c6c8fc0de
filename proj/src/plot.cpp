#include "bec/plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace bec {

namespace {

std::string g(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 10);
    return std::string(buf, r.ptr);
}

std::string px(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    return std::string(buf, r.ptr);
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

double nice_step(double span) {
    const double raw = span / 6.0;
    const double p = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (m * p >= raw) return m * p;
    return 10.0 * p;
}

}  // namespace

std::string bands_csv(const std::vector<DispersionBand>& bands) {
    std::ostringstream os;
    os << "band_id,k,lambda\n";
    for (size_t i = 0; i < bands.size(); ++i)
        for (const auto& s : bands[i].samples) os << i << "," << g(s.k) << "," << g(s.lambda) << "\n";
    return os.str();
}

std::string bands_svg(const std::vector<DispersionBand>& bands, const Symbol& bulk, const PlotFrame& f) {
    const double W = 720, H = 480, left = 70, right = 20, top = 40, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;
    auto X = [&](double k) { return left + (k - f.k_min) / (f.k_max - f.k_min) * pw; };
    auto Y = [&](double l) {
        const double c = std::clamp(l, f.lambda_min, f.lambda_max);
        return top + (f.lambda_max - c) / (f.lambda_max - f.lambda_min) * ph;
    };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
       << escape(f.title) << "</text>\n";

    // Bulk spectrum: envelope of each band over k2 at every plotted k.
    const int nk = 241;
    std::vector<double> ky;
    for (int j = 0; j < 161; ++j) ky.push_back(std::tan(0.5 * std::numbers::pi * (-0.995 + 1.99 * j / 160.0)));
    std::vector<std::vector<std::pair<double, double>>> env(bulk.size());
    std::vector<double> ks;
    for (int i = 0; i < nk; ++i) {
        const double k = f.k_min + (f.k_max - f.k_min) * i / (nk - 1);
        ks.push_back(k);
        const auto bb = bulk_bands(bulk, k, ky);
        for (int b = 0; b < bulk.size(); ++b) {
            const auto [lo, hi] = std::minmax_element(bb[b].begin(), bb[b].end());
            env[b].push_back({*lo, *hi});
        }
    }
    os << "<g fill=\"#c8d6e5\" stroke=\"none\">\n";
    for (const auto& e : env) {
        os << "<path d=\"";
        for (int i = 0; i < nk; ++i) os << (i ? " L" : "M") << px(X(ks[i])) << "," << px(Y(e[i].second));
        for (int i = nk - 1; i >= 0; --i) os << " L" << px(X(ks[i])) << "," << px(Y(e[i].first));
        os << " Z\"/>\n";
    }
    os << "</g>\n";

    // Axes and ticks.
    os << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph << "\"/>\n";
    os << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
    const double sk = nice_step(f.k_max - f.k_min);
    for (double t = std::ceil(f.k_min / sk) * sk; t <= f.k_max + 1e-12; t += sk) {
        os << "<line x1=\"" << px(X(t)) << "\" y1=\"" << px(top + ph) << "\" x2=\"" << px(X(t)) << "\" y2=\""
           << px(top + ph + 5) << "\" stroke=\"black\"/>";
        os << "<text x=\"" << px(X(t)) << "\" y=\"" << px(top + ph + 18) << "\" text-anchor=\"middle\">"
           << g(std::abs(t) < 1e-12 ? 0.0 : t) << "</text>\n";
    }
    const double sl = nice_step(f.lambda_max - f.lambda_min);
    for (double t = std::ceil(f.lambda_min / sl) * sl; t <= f.lambda_max + 1e-12; t += sl) {
        os << "<line x1=\"" << px(left - 5) << "\" y1=\"" << px(Y(t)) << "\" x2=\"" << px(left) << "\" y2=\""
           << px(Y(t)) << "\" stroke=\"black\"/>";
        os << "<text x=\"" << px(left - 8) << "\" y=\"" << px(Y(t) + 4) << "\" text-anchor=\"end\">"
           << g(std::abs(t) < 1e-12 ? 0.0 : t) << "</text>\n";
    }
    os << "<text x=\"" << px(left + pw / 2) << "\" y=\"" << px(H - 10) << "\" text-anchor=\"middle\">k</text>\n";
    os << "<text x=\"18\" y=\"" << px(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << px(top + ph / 2) << ")\">lambda</text>\n</g>\n";

    // Fiducial energy.
    os << "<line x1=\"" << px(left) << "\" y1=\"" << px(Y(f.E)) << "\" x2=\"" << px(left + pw) << "\" y2=\""
       << px(Y(f.E)) << "\" stroke=\"#888888\" stroke-dasharray=\"6,4\"/>\n";

    static const char* colors[] = {"#c0392b", "#2471a3", "#229954", "#8e44ad", "#d68910", "#17a589"};
    os << "<g fill=\"none\" stroke-width=\"2\">\n";
    for (size_t i = 0; i < bands.size(); ++i) {
        const auto& s = bands[i].samples;
        os << "<path stroke=\"" << colors[i % 6] << "\"" << (bands[i].flat ? " stroke-dasharray=\"3,3\"" : "")
           << " d=\"";
        for (size_t j = 0; j < s.size(); ++j) os << (j ? " L" : "M") << px(X(s[j].k)) << "," << px(Y(s[j].lambda));
        os << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::input, "cannot write '" + path + "'");
    out << content;
    if (!out) fail(ErrorKind::input, "write to '" + path + "' failed");
}

}  // namespace bec
