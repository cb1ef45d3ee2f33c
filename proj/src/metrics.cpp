#include "afesim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "afesim/io.hpp"

namespace afesim {

double fom_walden(double power_w, double enob_bits, double nyquist_sps) {
    if (!(power_w > 0.0 && nyquist_sps > 0.0)) {
        throw std::invalid_argument("fom_walden: power and nyquist rate must be > 0");
    }
    return power_w / (std::pow(2.0, enob_bits) * nyquist_sps) * 1e12;
}

double fom_schreier(double dr_db, double bw_hz, double power_w) {
    if (!(bw_hz > 0.0 && power_w > 0.0)) {
        throw std::invalid_argument("fom_schreier: bandwidth and power must be > 0");
    }
    return dr_db + 10.0 * std::log10(bw_hz / power_w);
}

std::vector<ComparisonRow> comparison_table(std::vector<ConverterRecord> records) {
    if (records.empty()) throw std::invalid_argument("comparison_table: no records");
    std::vector<ComparisonRow> rows;
    rows.reserve(records.size());
    for (auto& rec : records) {
        ComparisonRow row;
        if (rec.enob_bits) row.fom_w_pj = fom_walden(rec.power_w, *rec.enob_bits, rec.nyquist_sps);
        if (rec.dr_db) row.fom_s_db = fom_schreier(*rec.dr_db, rec.bw_hz, rec.power_w);
        row.rec = std::move(rec);
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
        if (a.fom_s_db.has_value() != b.fom_s_db.has_value()) return a.fom_s_db.has_value();
        if (a.fom_s_db && b.fom_s_db && *a.fom_s_db != *b.fom_s_db) {
            return *a.fom_s_db > *b.fom_s_db;
        }
        return a.rec.label < b.rec.label;
    });
    return rows;
}

std::vector<ConverterRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_records_csv: cannot open " + path);
    std::vector<ConverterRecord> recs;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {  // label,power_w,enob_bits,dr_db,bw_hz
            header = false;
            continue;
        }
        std::istringstream ss(line);
        std::string field;
        ConverterRecord r;
        std::getline(ss, r.label, ',');
        std::getline(ss, field, ',');
        r.power_w = std::stod(field);
        std::getline(ss, field, ',');
        if (!field.empty()) r.enob_bits = std::stod(field);
        std::getline(ss, field, ',');
        if (!field.empty()) r.dr_db = std::stod(field);
        std::getline(ss, field, ',');
        r.bw_hz = std::stod(field);
        r.nyquist_sps = 2.0 * r.bw_hz;
        recs.push_back(std::move(r));
    }
    return recs;
}

namespace {

std::string opt_str(const std::optional<double>& v, int prec) {
    if (!v) return "";
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(prec) << *v;
    return ss.str();
}

}  // namespace

void write_comparison_csv(const std::vector<ComparisonRow>& rows, const std::string& path) {
    std::ostringstream out;
    out.precision(10);
    out << "label,power_w,enob_bits,dr_db,bw_hz,nyquist_sps,fom_w_pj,fom_s_db\n";
    for (const auto& row : rows) {
        out << row.rec.label << ',' << row.rec.power_w << ',' << opt_str(row.rec.enob_bits, 1)
            << ',' << opt_str(row.rec.dr_db, 1) << ',' << row.rec.bw_hz << ','
            << row.rec.nyquist_sps << ',' << opt_str(row.fom_w_pj, 4) << ','
            << opt_str(row.fom_s_db, 4) << '\n';
    }
    atomic_write(path, out.str());
}

std::string format_comparison_text(const std::vector<ComparisonRow>& rows) {
    std::ostringstream out;
    out << std::left << std::setw(28) << "label" << std::right << std::setw(12) << "power_uW"
        << std::setw(8) << "enob" << std::setw(8) << "dr_db" << std::setw(10) << "bw_hz"
        << std::setw(12) << "fom_w_pj" << std::setw(10) << "fom_s_db" << '\n';
    for (const auto& row : rows) {
        auto dash = [](const std::string& s) { return s.empty() ? std::string("-") : s; };
        std::ostringstream pw;
        pw << std::fixed << std::setprecision(1) << row.rec.power_w * 1e6;
        out << std::left << std::setw(28) << row.rec.label << std::right << std::setw(12)
            << pw.str() << std::setw(8) << dash(opt_str(row.rec.enob_bits, 1)) << std::setw(8)
            << dash(opt_str(row.rec.dr_db, 1)) << std::setw(10) << row.rec.bw_hz << std::setw(12)
            << dash(opt_str(row.fom_w_pj, 1)) << std::setw(10) << dash(opt_str(row.fom_s_db, 1))
            << '\n';
    }
    return out.str();
}

DrCurve dr_sweep(const ModulatorConfig& cfg_template, const std::vector<double>& amps_dbfs,
                 const SweepAnalysis& analysis, const NoiseInjection& noise) {
    if (amps_dbfs.size() < 3) throw std::invalid_argument("dr_sweep: need >= 3 amplitudes");
    std::vector<double> amps = amps_dbfs;
    std::sort(amps.begin(), amps.end());

    DrCurve curve;
    std::vector<bool> resolved;
    for (const double a_dbfs : amps) {
        const double amp_v = std::pow(10.0, a_dbfs / 20.0) * cfg_template.vfb_v();
        SampleStream in = gen_sine(amp_v, analysis.sig_freq_hz, cfg_template.fs_hz,
                                   cfg_template.duration_samples);
        const ModTrace tr = simulate(cfg_template, in, noise);
        const Spectrum sp = periodogram(tr.q.to_stream(), analysis.n_fft, analysis.window);
        const SnrResult r = snr_enob(sp, analysis.sig_freq_hz, analysis.bw_hz);
        curve.points.emplace_back(a_dbfs, r.snr_db);
        resolved.push_back(r.signal_resolved);
    }

    double peak = -1e30;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        if (resolved[i] && curve.points[i].second > peak) {
            peak = curve.points[i].second;
            curve.peak_snr_db = peak;
            curve.peak_amp_dbfs = curve.points[i].first;
        }
    }
    double a_min_dbfs = 0.0, a_max_dbfs = 0.0;
    bool have_min = false, have_max = false;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        if (!resolved[i]) continue;
        if (!have_min && curve.points[i].second > 0.0) {
            a_min_dbfs = curve.points[i].first;
            have_min = true;
        }
        if (curve.points[i].second >= peak - 6.0) {
            a_max_dbfs = curve.points[i].first;
            have_max = true;
        }
    }
    if (have_min && have_max) curve.dr_db = a_max_dbfs - a_min_dbfs;
    return curve;
}

void write_dr_curve_csv(const DrCurve& c, const std::string& path,
                        const std::string& header_comment) {
    std::ostringstream out;
    out.precision(10);
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    out << "# dr_db=" << c.dr_db << " peak_snr_db=" << c.peak_snr_db
        << " peak_amp_dbfs=" << c.peak_amp_dbfs << "\n";
    out << "amp_dbfs,snr_db\n";
    for (const auto& [a, s] : c.points) out << a << ',' << s << '\n';
    atomic_write(path, out.str());
}

}  // namespace afesim
