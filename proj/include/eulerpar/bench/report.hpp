#pragma once

/*!
  \file report.hpp
  \brief Scaling tables, CSV export and gnuplot scripts.

  CSV columns: strategy,workers,nx,ny,steps,wall_seconds,factor. Times are
  written with 17 significant digits, factors with one decimal, so a parsed
  file reproduces the rows exactly.
*/

#include <eulerpar/bench/harness.hpp>
#include <eulerpar/bench/plan.hpp>
#include <eulerpar/errors.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace eulerpar::bench {

struct SummaryRow {
    StrategyId strategy = StrategyId::sequential;
    std::size_t workers = 1;
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::size_t steps = 0;
    double wall_seconds = 0.0;
    //! Speedup or normalized runtime, rounded to one decimal.
    double factor = 1.0;

    friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

struct Summary {
    BenchMode mode = BenchMode::strong;
    std::size_t repetitions = 1;
    std::vector<SummaryRow> rows;
};

inline std::string format_fixed(double x, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

inline std::string format_exact(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline double round_one_decimal(double x) { return std::stod(format_fixed(x, 1)); }

/*!
  Table rows ordered by strategy, then worker count. All records must come
  from one plan: same mode, step count, time step and repetition count, the
  same grid per worker count, and no repeated (strategy, workers) pair.
*/
inline Summary summarize(const std::vector<BenchRecord>& records)
{
    Summary out;
    if (records.empty())
        return out;
    const BenchRecord& first = records.front();
    out.mode = first.mode;
    out.repetitions = first.repetitions;

    std::map<std::size_t, std::pair<std::size_t, std::size_t>> grid_of;
    std::map<std::pair<StrategyId, std::size_t>, const BenchRecord*> by_key;
    for (const BenchRecord& r : records) {
        if (r.mode != first.mode || r.steps != first.steps || r.dt != first.dt ||
            r.repetitions != first.repetitions)
            throw MixedPlans("records differ in mode, steps, dt or repetitions");
        const auto [it, fresh] = grid_of.try_emplace(r.workers, r.nx, r.ny);
        if (!fresh && it->second != std::pair(r.nx, r.ny))
            throw MixedPlans("two grids for " + std::to_string(r.workers) + " workers");
        if (r.mode == BenchMode::strong && (r.nx != first.nx || r.ny != first.ny))
            throw MixedPlans("strong-scaling records on different grids");
        if (!by_key.try_emplace({r.strategy, r.workers}, &r).second)
            throw MixedPlans(std::string("duplicate record for ") + std::string(strategies::name(r.strategy)) +
                             " with " + std::to_string(r.workers) + " workers");
    }
    for (const auto& [key, r] : by_key)
        out.rows.push_back({r->strategy, r->workers, r->nx, r->ny, r->steps, r->wall_seconds,
                            round_one_decimal(r->factor)});
    return out;
}

//! Plain-text table: one line per row, "time (factor)" as in scaling tables.
inline std::string format_table(const Summary& s)
{
    std::ostringstream os;
    os << (s.mode == BenchMode::strong ? "strong scaling, speedup" : "weak scaling, normalized runtime")
       << " in parentheses, median of " << s.repetitions << " repetition(s)\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-22s %7s %11s %7s %20s\n", "strategy", "workers", "grid", "steps",
                  "time [s] (factor)");
    os << line;
    for (const SummaryRow& r : s.rows) {
        const std::string grid = std::to_string(r.nx) + "x" + std::to_string(r.ny);
        const std::string cell = format_fixed(r.wall_seconds, 3) + " (" + format_fixed(r.factor, 1) + ")";
        std::snprintf(line, sizeof line, "%-22s %7zu %11s %7zu %20s\n",
                      std::string(strategies::name(r.strategy)).c_str(), r.workers, grid.c_str(), r.steps,
                      cell.c_str());
        os << line;
    }
    return os.str();
}

// --- CSV -------------------------------------------------------------------

inline constexpr std::string_view csv_header = "strategy,workers,nx,ny,steps,wall_seconds,factor";

inline std::string csv_field(std::string_view v)
{
    if (v.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(v);
    std::string out = "\"";
    for (char c : v) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string to_csv(const std::vector<SummaryRow>& rows)
{
    std::string out(csv_header);
    out += "\r\n";
    for (const SummaryRow& r : rows) {
        out += csv_field(strategies::name(r.strategy)) + "," + std::to_string(r.workers) + "," +
               std::to_string(r.nx) + "," + std::to_string(r.ny) + "," + std::to_string(r.steps) + "," +
               format_exact(r.wall_seconds) + "," + format_fixed(r.factor, 1) + "\r\n";
    }
    return out;
}

//! Split RFC-4180 text into records of fields.
inline std::vector<std::vector<std::string>> parse_csv_records(std::string_view text)
{
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t k = 0; k < text.size(); ++k) {
        const char c = text[k];
        if (quoted) {
            if (c == '"' && k + 1 < text.size() && text[k + 1] == '"') {
                field += '"';
                ++k;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && k + 1 < text.size() && text[k + 1] == '\n')
                ++k;
            if (any || !field.empty()) {
                fields.push_back(std::move(field));
                records.push_back(std::move(fields));
            }
            fields.clear();
            field.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted)
        throw InvalidArgument("csv: unterminated quoted field");
    if (any || !field.empty()) {
        fields.push_back(std::move(field));
        records.push_back(std::move(fields));
    }
    return records;
}

inline std::vector<SummaryRow> parse_csv(std::string_view text)
{
    const auto records = parse_csv_records(text);
    if (records.empty())
        throw InvalidArgument("csv: missing header");
    std::string header;
    for (std::size_t k = 0; k < records[0].size(); ++k)
        header += (k ? "," : "") + records[0][k];
    if (header != csv_header)
        throw InvalidArgument("csv: unexpected header '" + header + "'");
    std::vector<SummaryRow> rows;
    for (std::size_t n = 1; n < records.size(); ++n) {
        const auto& f = records[n];
        if (f.size() != 7)
            throw InvalidArgument("csv: line " + std::to_string(n + 1) + " has " + std::to_string(f.size()) +
                                  " fields");
        try {
            rows.push_back({strategies::parse_strategy(f[0]), std::stoul(f[1]), std::stoul(f[2]),
                            std::stoul(f[3]), std::stoul(f[4]), std::stod(f[5]), std::stod(f[6])});
        } catch (const std::logic_error&) {
            throw InvalidArgument("csv: malformed number on line " + std::to_string(n + 1));
        }
    }
    return rows;
}

// --- gnuplot -----------------------------------------------------------------

/*!
  Log-log factor-vs-workers plot, one sidecar .dat file per strategy. Strong
  scaling gets an ideal line y = x through the first point, weak scaling the
  constant line through it.
*/
struct PlotScript {
    std::string script;
    std::map<std::string, std::string> data_files;  // file name -> contents
};

inline PlotScript make_plotscript(const Summary& s, const std::string& stem)
{
    PlotScript out;
    std::map<StrategyId, std::string> series;
    for (const SummaryRow& r : s.rows)
        series[r.strategy] += std::to_string(r.workers) + " " + format_exact(r.wall_seconds) + " " +
                              format_fixed(r.factor, 1) + "\n";

    const bool strong = s.mode == BenchMode::strong;
    std::ostringstream gp;
    gp << "# " << mode_name(s.mode) << " scaling, median of " << s.repetitions << " repetition(s)\n";
    gp << "set terminal pngcairo size 800,600\n";
    gp << "set output '" << stem << ".png'\n";
    gp << "set logscale xy 2\n";
    gp << "set key left top\n";
    gp << "set xlabel 'workers'\n";
    gp << "set ylabel '" << (strong ? "speedup" : "normalized runtime") << "'\n";
    if (!s.rows.empty()) {
        const SummaryRow& p0 = s.rows.front();
        if (strong)
            gp << "ideal(x) = " << format_fixed(p0.factor, 1) << " * x / " << p0.workers << ".0\n";
        else
            gp << "ideal(x) = " << format_fixed(p0.factor, 1) << "\n";
        std::size_t lo = p0.workers, hi = p0.workers;
        for (const SummaryRow& r : s.rows) {
            lo = std::min(lo, r.workers);
            hi = std::max(hi, r.workers);
        }
        gp << "set xrange [" << lo << ":" << std::max(hi, lo + 1) << "]\n";
        gp << "plot ideal(x) with lines lc rgb 'black' title 'ideal'";
        for (const auto& [strategy, data] : series) {
            const std::string file = stem + "_" + std::string(strategies::name(strategy)) + ".dat";
            out.data_files[file] = "# workers wall_seconds factor\n" + data;
            gp << ", \\\n     '" << file << "' using 1:3 with linespoints title '" << strategies::name(strategy)
               << "'";
        }
        gp << "\n";
    }
    out.script = gp.str();
    return out;
}

// --- files -------------------------------------------------------------------

enum class ReportFormat { csv, plotscript };

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& contents)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoFailure("cannot open " + path.string() + " for writing");
    os << contents;
    os.close();
    if (!os)
        throw IoFailure("cannot write " + path.string());
}

}  // namespace detail

/*!
  Write the summary to `path`. For plot scripts the .dat files go next to
  the script, named after its stem.
*/
inline void export_report(const Summary& s, ReportFormat format, const std::filesystem::path& path)
{
    if (format == ReportFormat::csv) {
        detail::write_file(path, to_csv(s.rows));
        return;
    }
    const PlotScript ps = make_plotscript(s, path.stem().string());
    for (const auto& [name, contents] : ps.data_files)
        detail::write_file(path.parent_path() / name, contents);
    detail::write_file(path, ps.script);
}

inline std::vector<SummaryRow> read_csv(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoFailure("cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_csv(ss.str());
}

}  // namespace eulerpar::bench
