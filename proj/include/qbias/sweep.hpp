#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qbias/channels.hpp"
#include "qbias/measures.hpp"
#include "qbias/optimize.hpp"
#include "qbias/rng.hpp"

namespace qbias {

struct MeasureSet {
    bool se = false;
    bool ec = false;
    bool ddc = false;
    bool cds = false;
    bool ic = false;
    bool eb = false;

    bool any() const { return se || ec || ddc || cds || ic || eb; }

    static MeasureSet all() { return {true, true, true, true, true, true}; }
};

inline MeasureSet parse_measures(std::string_view spec) {
    MeasureSet m;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const std::size_t comma = std::min(spec.find(',', pos), spec.size());
        const std::string_view tok = spec.substr(pos, comma - pos);
        if (tok == "se") m.se = true;
        else if (tok == "ec") m.ec = true;
        else if (tok == "ddc") m.ddc = true;
        else if (tok == "cds") m.cds = true;
        else if (tok == "ic") m.ic = true;
        else if (tok == "eb") m.eb = true;
        else if (!tok.empty()) throw std::invalid_argument("unknown measure: " + std::string(tok));
        pos = comma + 1;
    }
    if (!m.any()) throw std::invalid_argument("no measures selected");
    return m;
}

// One (family, p) row of the sweep. Absent measures stay unset and serialize
// as empty CSV fields.
struct SweepPoint {
    std::string family;
    double p = 0.0;
    std::optional<double> se, ec, ddc, cds, ic, eb1, eb2;
    int restarts_used = 0;
    std::uint64_t seed = 0;
    std::optional<std::int64_t> wall_ms;
};

struct RunConfig {
    std::vector<std::string> families;
    double p_start = 0.0;
    double p_end = 1.0;
    int p_steps = 21;
    MeasureSet measures = MeasureSet::all();
    OptimizerConfig optimizer;
    std::string out_path;
    int workers = 0;     // 0: QBIAS_WORKERS env var, else hardware concurrency
    bool timing = false; // fills wall_ms; breaks byte-identical reruns by design
};

inline void validate(const RunConfig& rc) {
    if (rc.families.empty()) throw std::invalid_argument("RunConfig: no families");
    for (const std::string& f : rc.families) family_by_label(f);
    if (!(rc.p_start >= 0.0 && rc.p_start <= rc.p_end && rc.p_end <= 1.0))
        throw std::invalid_argument("RunConfig: need 0 <= p_start <= p_end <= 1");
    if (rc.p_steps < 1) throw std::invalid_argument("RunConfig: p_steps must be >= 1");
    if (!rc.measures.any()) throw std::invalid_argument("RunConfig: no measures");
    validate(rc.optimizer);
}

inline std::vector<double> p_grid(const RunConfig& rc) {
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(rc.p_steps));
    if (rc.p_steps == 1) {
        grid.push_back(rc.p_start);
        return grid;
    }
    for (int i = 0; i < rc.p_steps; ++i)
        grid.push_back(i == rc.p_steps - 1
                           ? rc.p_end
                           : rc.p_start + (rc.p_end - rc.p_start) * i / (rc.p_steps - 1));
    return grid;
}

namespace detail {

// Per-functional substream tags; the stream a functional sees depends only on
// (seed, family, p-index, functional), never on which measures run or in what
// order the scheduler visits points.
enum : std::uint64_t { kTagSe = 1, kTagEc = 2, kTagDdc = 3, kTagCds = 4, kTagIc = 5 };

} // namespace detail

inline SweepPoint compute_sweep_point(const ChannelFamily& family, double p, int p_index,
                                      const RunConfig& rc) {
    const auto t0 = std::chrono::steady_clock::now();
    const KrausChannel channel = family.make(p);
    const std::uint64_t base =
        mix_seed(rc.optimizer.seed, {hash_label(family.label), static_cast<std::uint64_t>(p_index)});
    const auto sub_config = [&](std::uint64_t tag) {
        OptimizerConfig c = rc.optimizer;
        c.seed = mix_seed(base, tag);
        return c;
    };

    SweepPoint pt;
    pt.family = family.label;
    pt.p = p;
    pt.seed = rc.optimizer.seed;

    std::vector<OptimizerPair> pairs;
    if (rc.measures.se || rc.measures.eb) {
        const OptimizerConfig c = sub_config(detail::kTagSe);
        SavedEntanglement se = saved_entanglement(channel, c);
        if (rc.measures.se) pt.se = se.value;
        pairs = std::move(se.pairs);
        pt.restarts_used += se.restarts_used;
    }
    if (rc.measures.ec) {
        const OptimizerConfig c = sub_config(detail::kTagEc);
        pt.ec = entanglement_capacity(channel, c);
        pt.restarts_used += c.restarts + static_cast<int>(detail::bell_state_starts().size());
    }
    if (rc.measures.ddc) pt.ddc = ddc(channel, sub_config(detail::kTagDdc));
    if (rc.measures.cds) {
        const OptimizerConfig c = sub_config(detail::kTagCds);
        pt.cds = cds(channel, c);
        pt.restarts_used += 2 * c.restarts;
    }
    if (rc.measures.ic) {
        const OptimizerConfig c = sub_config(detail::kTagIc);
        pt.ic = ic(channel, c);
        pt.restarts_used += c.restarts + static_cast<int>(detail::se_pair_starts().size());
    }
    if (rc.measures.eb) {
        const EbBounds b = eb_bounds(channel, pairs, sub_config(detail::kTagSe));
        pt.eb1 = b.eb1;
        pt.eb2 = b.eb2;
    }
    if (rc.timing)
        pt.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return pt;
}

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QBIAS_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace detail {

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

inline constexpr std::string_view kCsvHeader =
    "family,p,se,ec,ddc,cds,ic,eb1,eb2,restarts_used,seed,wall_ms";

inline std::string emit_csv(const std::vector<SweepPoint>& points) {
    std::string out{kCsvHeader};
    out += '\n';
    const auto field = [](const std::optional<double>& v) {
        return v ? detail::format_real(*v) : std::string();
    };
    for (const SweepPoint& pt : points) {
        out += pt.family;
        out += ',';
        out += detail::format_real(pt.p);
        for (const auto* v : {&pt.se, &pt.ec, &pt.ddc, &pt.cds, &pt.ic, &pt.eb1, &pt.eb2}) {
            out += ',';
            out += field(*v);
        }
        out += ',';
        out += std::to_string(pt.restarts_used);
        out += ',';
        out += std::to_string(pt.seed);
        out += ',';
        if (pt.wall_ms) out += std::to_string(*pt.wall_ms);
        out += '\n';
    }
    return out;
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(pos));
            return fields;
        }
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
}

inline double parse_real(std::string_view s, int line_no) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error("malformed CSV: bad number on line " + std::to_string(line_no));
    return v;
}

} // namespace detail

inline std::vector<SweepPoint> parse_csv(std::string_view text) {
    std::vector<SweepPoint> points;
    std::size_t pos = 0;
    int line_no = 0;
    bool saw_header = false;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;
        ++line_no;
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != kCsvHeader)
                throw std::runtime_error("malformed CSV: unexpected header");
            saw_header = true;
            continue;
        }
        const std::vector<std::string_view> f = detail::split_fields(line);
        if (f.size() != 12)
            throw std::runtime_error("malformed CSV: wrong field count on line " +
                                     std::to_string(line_no));
        SweepPoint pt;
        pt.family = std::string(f[0]);
        if (pt.family.empty())
            throw std::runtime_error("malformed CSV: empty family on line " +
                                     std::to_string(line_no));
        pt.p = detail::parse_real(f[1], line_no);
        const auto opt = [&](std::string_view s) -> std::optional<double> {
            if (s.empty()) return std::nullopt;
            return detail::parse_real(s, line_no);
        };
        pt.se = opt(f[2]);
        pt.ec = opt(f[3]);
        pt.ddc = opt(f[4]);
        pt.cds = opt(f[5]);
        pt.ic = opt(f[6]);
        pt.eb1 = opt(f[7]);
        pt.eb2 = opt(f[8]);
        pt.restarts_used = static_cast<int>(detail::parse_real(f[9], line_no));
        pt.seed = static_cast<std::uint64_t>(std::strtoull(std::string(f[10]).c_str(), nullptr, 10));
        if (!f[11].empty())
            pt.wall_ms = static_cast<std::int64_t>(detail::parse_real(f[11], line_no));
        points.push_back(std::move(pt));
    }
    if (!saw_header) throw std::runtime_error("malformed CSV: missing header");
    return points;
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

// Runs the sweep, fanning points out to a small worker pool. Rows are keyed by
// their (family, p) slot and sorted before serialization, so the schedule can
// never change the output bytes. Writes CSV to rc.out_path when set.
inline std::vector<SweepPoint> run_sweep(const RunConfig& rc) {
    validate(rc);
    const std::vector<double> grid = p_grid(rc);

    struct Task {
        const ChannelFamily* family;
        double p;
        int p_index;
    };
    std::vector<Task> tasks;
    for (const std::string& label : rc.families) {
        const ChannelFamily& fam = family_by_label(label);
        for (int i = 0; i < static_cast<int>(grid.size()); ++i)
            tasks.push_back({&fam, grid[i], i});
    }

    std::vector<SweepPoint> points(tasks.size());
    const int workers = std::min<int>(resolve_workers(rc.workers),
                                      static_cast<int>(tasks.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            points[i] = compute_sweep_point(*tasks[i].family, tasks[i].p, tasks[i].p_index, rc);
    } else {
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                while (!failed.load(std::memory_order_relaxed)) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) return;
                    try {
                        points[i] = compute_sweep_point(*tasks[i].family, tasks[i].p,
                                                        tasks[i].p_index, rc);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!error) error = std::current_exception();
                        failed.store(true, std::memory_order_relaxed);
                        return;
                    }
                }
            });
        for (std::thread& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }

    std::stable_sort(points.begin(), points.end(), [](const SweepPoint& a, const SweepPoint& b) {
        if (a.family != b.family) return a.family < b.family;
        return a.p < b.p;
    });
    if (!rc.out_path.empty()) write_file(rc.out_path, emit_csv(points));
    return points;
}

// Renders a gnuplot script (one panel per family, the six headline series
// against p) from CSV content. Pure function of its inputs, so a rerun on an
// identical CSV reproduces the script byte for byte.
inline std::string render_plot_script(const std::string& csv_path, std::string_view csv_text) {
    const std::vector<SweepPoint> points = parse_csv(csv_text);
    if (points.empty()) throw std::runtime_error("malformed CSV: no data rows");
    std::set<std::string> families;
    for (const SweepPoint& pt : points) families.insert(pt.family);

    const int cols = families.size() > 1 ? 2 : 1;
    const int rows = (static_cast<int>(families.size()) + cols - 1) / cols;

    std::string s;
    s += "# channel functionals vs noise strength; one panel per family\n";
    s += "# usage: gnuplot -persist <this file>\n";
    s += "set datafile separator ','\n";
    s += "set datafile missing ''\n";
    s += "set xlabel 'p'\n";
    s += "set ylabel 'value'\n";
    s += "set key outside right\n";
    s += "set multiplot layout " + std::to_string(rows) + "," + std::to_string(cols) + "\n";
    struct Series {
        const char* title;
        int column;
    };
    static constexpr Series series[] = {{"SE", 3},  {"EC", 4}, {"DDC", 5},
                                        {"CDS", 6}, {"IC", 7}, {"EB1", 8}};
    for (const std::string& fam : families) {
        s += "set title '" + fam + "'\n";
        s += "plot ";
        bool first = true;
        for (const Series& sr : series) {
            if (!first) s += ", \\\n     ";
            first = false;
            s += "'" + csv_path + "' skip 1 using (strcol(1) eq '" + fam +
                 "' ? column(2) : NaN):(column(" + std::to_string(sr.column) +
                 ")) with linespoints title '" + sr.title + "'";
        }
        s += "\n";
    }
    s += "unset multiplot\n";
    return s;
}

// File-level wrapper: reads the CSV, writes the script. Nothing is written
// when the CSV fails validation.
inline void emit_plot_script(const std::string& csv_path, const std::string& out_path) {
    const std::string script = render_plot_script(csv_path, read_file(csv_path));
    write_file(out_path, script);
}

} // namespace qbias
