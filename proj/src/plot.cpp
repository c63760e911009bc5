#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include <r1h/bench.hpp>
#include <r1h/errors.hpp>

namespace r1h
{

namespace
{

struct Series
{
    std::string label;
    std::vector<std::pair<double, double>> points; // (M, mean error)
};

std::string fmt(double v, const char* spec = "%.6g")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::vector<Series> collect(const std::vector<CellSummary>& summary)
{
    if (summary.empty())
    {
        throw InvalidArgument("emit_plot: empty summary");
    }
    std::set<double> snrs;
    for (const auto& c : summary)
    {
        snrs.insert(c.snr_db);
    }
    const bool tag_snr = snrs.size() > 1;

    std::vector<Series> out;
    std::map<std::pair<Method, double>, std::size_t> index;
    for (const auto& c : summary)
    {
        const auto key = std::make_pair(c.method, c.snr_db);
        auto it = index.find(key);
        if (it == index.end())
        {
            std::string label(to_string(c.method));
            if (tag_snr)
            {
                label += " @ " + fmt(c.snr_db, "%g") + " dB";
            }
            it = index.emplace(key, out.size()).first;
            out.push_back({label, {}});
        }
        out[it->second].points.emplace_back(static_cast<double>(c.elements), c.mean_abs_error);
    }
    for (auto& s : out)
    {
        std::sort(s.points.begin(), s.points.end());
    }
    return out;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char ch : s)
    {
        switch (ch)
        {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += ch;
        }
    }
    return out;
}

std::string svg(const std::vector<Series>& series)
{
    constexpr double width = 760;
    constexpr double height = 480;
    constexpr double left = 80;
    constexpr double right = 220;
    constexpr double top = 30;
    constexpr double bottom = 60;
    const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                             "#9467bd", "#8c564b", "#e377c2", "#17becf"};

    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : series)
    {
        for (auto [x, y] : s.points)
        {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            if (y > 0.0 && std::isfinite(y))
            {
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
    }
    if (!(ymin <= ymax))
    {
        ymin = 1e-3;
        ymax = 1.0;
    }
    const double dlo = std::floor(std::log10(ymin));
    const double dhi = std::max(std::ceil(std::log10(ymax)), dlo + 1);
    const double lx0 = std::log2(xmin);
    const double lx1 = std::max(std::log2(xmax), lx0 + 1);

    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto px = [&](double x) { return left + (std::log2(x) - lx0) / (lx1 - lx0) * pw; };
    auto py = [&](double y) { return top + (dhi - std::log10(y)) / (dhi - dlo) * ph; };

    std::string o;
    o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\""
         + fmt(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(pw)
         + "\" height=\"" + fmt(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

    // log-y decades
    for (double d = dlo; d <= dhi; d += 1.0)
    {
        const double y = py(std::pow(10.0, d));
        o += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(left + pw)
             + "\" y2=\"" + fmt(y) + "\" stroke=\"#dddddd\"/>\n";
        o += "<text x=\"" + fmt(left - 6) + "\" y=\"" + fmt(y + 4)
             + "\" text-anchor=\"end\">1e" + fmt(d, "%.0f") + "</text>\n";
    }
    std::set<double> xs;
    for (const auto& s : series)
    {
        for (auto [x, y] : s.points)
        {
            xs.insert(x);
        }
    }
    for (double x : xs)
    {
        o += "<text x=\"" + fmt(px(x)) + "\" y=\"" + fmt(top + ph + 18)
             + "\" text-anchor=\"middle\">" + fmt(x, "%g") + "</text>\n";
    }
    o += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"" + fmt(height - 16)
         + "\" text-anchor=\"middle\">array size M</text>\n";
    o += "<text transform=\"translate(20," + fmt(top + ph / 2)
         + ") rotate(-90)\" text-anchor=\"middle\">mean absolute error (deg, log scale)</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i)
    {
        const auto& s = series[i];
        const char* colour = palette[i % std::size(palette)];
        std::string pts;
        for (auto [x, y] : s.points)
        {
            if (y > 0.0 && std::isfinite(y))
            {
                pts += fmt(px(x)) + "," + fmt(py(y)) + " ";
            }
        }
        o += "<g class=\"series\" data-label=\"" + escape(s.label) + "\">\n";
        o += "<polyline fill=\"none\" stroke=\"" + std::string(colour)
             + "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
        for (auto [x, y] : s.points)
        {
            if (y > 0.0 && std::isfinite(y))
            {
                o += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y))
                     + "\" r=\"3\" fill=\"" + colour + "\"/>\n";
            }
        }
        const double ly = top + 10 + 18.0 * static_cast<double>(i);
        o += "<line x1=\"" + fmt(left + pw + 12) + "\" y1=\"" + fmt(ly) + "\" x2=\""
             + fmt(left + pw + 36) + "\" y2=\"" + fmt(ly) + "\" stroke=\"" + colour
             + "\" stroke-width=\"2\"/>\n";
        o += "<text x=\"" + fmt(left + pw + 42) + "\" y=\"" + fmt(ly + 4) + "\">"
             + escape(s.label) + "</text>\n";
        o += "</g>\n";
    }
    o += "</svg>\n";
    return o;
}

std::string gnuplot(const std::vector<Series>& series)
{
    std::string o;
    o += "# mean absolute DoA error against array size\n";
    o += "set logscale y\n";
    o += "set logscale x 2\n";
    o += "set xlabel \"array size M\"\n";
    o += "set ylabel \"mean absolute error (deg)\"\n";
    o += "set key outside right\n";
    o += "set grid\n";
    for (std::size_t i = 0; i < series.size(); ++i)
    {
        o += "$s" + std::to_string(i) + " << EOD\n";
        for (auto [x, y] : series[i].points)
        {
            o += fmt(x, "%g") + " " + fmt(y, "%.17g") + "\n";
        }
        o += "EOD\n";
    }
    o += "plot ";
    for (std::size_t i = 0; i < series.size(); ++i)
    {
        if (i > 0)
        {
            o += ", \\\n     ";
        }
        o += "$s" + std::to_string(i) + " using 1:2 with linespoints title \"" + series[i].label
             + "\"";
    }
    o += "\n";
    return o;
}

} // namespace

std::string format_plot(const std::vector<CellSummary>& summary, std::string_view format)
{
    if (format != "svg" && format != "gnuplot")
    {
        throw InvalidArgument("emit_plot: unknown format '" + std::string(format) + "'");
    }
    const auto series = collect(summary);
    return format == "svg" ? svg(series) : gnuplot(series);
}

void emit_plot(const std::vector<CellSummary>& summary, const std::filesystem::path& path,
               std::string_view format)
{
    const std::string text = format_plot(summary, format);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
    {
        throw IoError("cannot write " + path.string());
    }
    out << text;
    if (!out)
    {
        throw IoError("write failed for " + path.string());
    }
}

} // namespace r1h
