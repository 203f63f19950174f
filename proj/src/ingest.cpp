#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "cyperiods/ingest.hpp"

#include "cyperiods/error.hpp"

#include <httplib.h>
#include <json.hpp>
#include <openssl/evp.h>
#include <sys/file.h>
#include <unistd.h>
#include <fcntl.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>

namespace cyp {

namespace fs = std::filesystem;

namespace {

std::string data_dir()
{
    if (const char* d = std::getenv("CYPERIODS_DATA_DIR")) return d;
    return CYPERIODS_DATA_DIR;
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in) throw NotFound("cannot open " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string file_key(const std::string& label)
{
    std::string k;
    for (char c : label) k += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
    return k;
}

// flock on a sidecar file for the lifetime of the object
class FileLock {
public:
    FileLock(const fs::path& target, bool exclusive)
    {
        fd_ = ::open((target.string() + ".lock").c_str(), O_RDWR | O_CREAT, 0644);
        if (fd_ >= 0) ::flock(fd_, exclusive ? LOCK_EX : LOCK_SH);
    }
    ~FileLock()
    {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    int fd_ = -1;
};

std::vector<long> parse_longs(const std::string& text, char sep)
{
    std::vector<long> out;
    for (const auto& tok : split(text, sep)) {
        std::string t = trim(tok);
        if (t.empty()) continue;
        std::size_t used = 0;
        long v = std::stol(t, &used);
        if (used != t.size()) throw std::invalid_argument("bad integer '" + t + "'");
        out.push_back(v);
    }
    return out;
}

void check_fingerprint(const ModularForm& f, const LabelEntry& e)
{
    if (f.level != e.level || f.weight != e.weight)
        throw SanityCheckFailed(e.remote_label + ": level/weight " + std::to_string(f.level) + "/" +
                                std::to_string(f.weight) + " do not match " + e.label);
    for (std::size_t n = 1; n <= e.fingerprint.size() && n <= f.count(); ++n)
        if (f.a(n) != e.fingerprint[n - 1])
            throw SanityCheckFailed(e.remote_label + ": a_" + std::to_string(n) + " = " + std::to_string(f.a(n)) +
                                    " does not match " + e.label + " (" + std::to_string(e.fingerprint[n - 1]) + ")");
}

std::optional<CoefficientRecord> read_cache_file(const fs::path& p, std::size_t n_max)
{
    std::string text;
    {
        FileLock lock(p, false);
        std::ifstream in(p, std::ios::binary);
        if (!in) return std::nullopt;
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    auto pos = text.rfind("sha256\t");
    bool ok = pos != std::string::npos;
    std::string body = ok ? text.substr(0, pos) : "";
    if (ok && trim(text.substr(pos + 7)) != sha256_hex(body)) ok = false;
    CoefficientRecord rec;
    if (ok) {
        try {
            rec.form = parse_form_record(body, &rec.remote_label);
            rec.form.validate();
            if (rec.form.count() < n_max) return std::nullopt;
        } catch (const std::exception&) {
            ok = false;
        }
    }
    if (!ok) {
        // corrupt entry: drop it and let the caller refetch
        FileLock lock(p, true);
        std::error_code ec;
        fs::remove(p, ec);
        return std::nullopt;
    }
    rec.source = Source::cache;
    rec.sha256 = sha256_hex(body);
    return rec;
}

void write_cache(const fs::path& dir, const std::string& key, const CoefficientRecord& rec, std::size_t n_max)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) return;  // caching is best effort
    fs::path p = dir / (key + "__n" + std::to_string(n_max) + ".rec");
    ModularForm f = rec.form;
    f.coefficients.resize(n_max);
    std::string body = serialize_form_record(f, rec.remote_label, to_string(rec.source));
    FileLock lock(p, true);
    fs::path tmp = p;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) return;
        out << body << "sha256\t" << sha256_hex(body) << '\n';
    }
    fs::rename(tmp, p, ec);
}

std::optional<CoefficientRecord> lookup_cache(const fs::path& dir, const std::string& key, std::size_t n_max)
{
    fs::path exact = dir / (key + "__n" + std::to_string(n_max) + ".rec");
    if (fs::exists(exact))
        if (auto r = read_cache_file(exact, n_max)) return r;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) return std::nullopt;
    // any larger entry for the same label
    const std::string prefix = key + "__n";
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        std::string name = entry.path().filename().string();
        if (name.rfind(prefix, 0) != 0 || entry.path().extension() != ".rec") continue;
        std::size_t n = std::strtoul(name.c_str() + prefix.size(), nullptr, 10);
        if (n < n_max) continue;
        if (auto r = read_cache_file(entry.path(), n_max)) return r;
    }
    return std::nullopt;
}

CoefficientRecord fetch_remote(const std::string& remote_label, std::size_t n_max, const IngestConfig& cfg)
{
    static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(cfg.base_url, m, url_re)) throw NetworkError("bad base URL '" + cfg.base_url + "'");
    std::string prefix = m[2].matched ? std::string(m[2]) : "";
    if (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    httplib::Client cli(m[1]);
    cli.set_connection_timeout(cfg.timeout_seconds, 0);
    cli.set_read_timeout(cfg.timeout_seconds, 0);
    cli.set_follow_location(true);
    std::string path = prefix + "/api/mf_newforms/?label=" + remote_label +
                       "&_format=json&_fields=label,level,weight,dim,traces,fricke_eigenval";
    auto res = cli.Get(path);
    if (!res) throw NetworkError("GET " + cfg.base_url + path + ": " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw NetworkError("GET " + cfg.base_url + path + ": HTTP " + std::to_string(res->status));
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(res->body);
    } catch (const std::exception& e) {
        throw NetworkError(std::string("malformed JSON from remote: ") + e.what());
    }
    if (!doc.contains("data") || !doc["data"].is_array() || doc["data"].empty())
        throw UnknownLabel("remote has no newform " + remote_label);
    const auto& d = doc["data"][0];
    if (d.value("dim", 1) != 1) throw SanityCheckFailed(remote_label + " is not a rational newform");
    CoefficientRecord rec;
    rec.remote_label = remote_label;
    rec.source = Source::remote;
    ModularForm& f = rec.form;
    f.level = d.at("level").get<long>();
    f.weight = d.at("weight").get<int>();
    for (const auto& t : d.at("traces")) f.coefficients.push_back(t.get<long>());
    if (d.contains("fricke_eigenval") && d["fricke_eigenval"].is_number_integer())
        f.fricke_sign = d["fricke_eigenval"].get<int>();
    if (f.count() < n_max)
        throw InsufficientCoefficients("remote returned " + std::to_string(f.count()) + " coefficients for " +
                                       remote_label + ", need " + std::to_string(n_max));
    return rec;
}

}  // namespace

std::string to_string(Source s)
{
    switch (s) {
    case Source::remote: return "remote";
    case Source::cache: return "cache";
    case Source::fixture: return "fixture";
    }
    return "?";
}

std::string sha256_hex(const std::string& data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

const std::vector<LabelEntry>& label_table()
{
    static std::vector<LabelEntry> table;
    static std::once_flag once;
    std::call_once(once, [] {
        std::istringstream in(read_file(fs::path(data_dir()) / "forms" / "labels.tsv"));
        std::string line;
        bool header = true;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            if (header) {
                header = false;
                continue;
            }
            auto f = split(line, '\t');
            if (f.size() < 5) throw SanityCheckFailed("labels.tsv: short row '" + line + "'");
            LabelEntry e;
            e.label = f[0];
            e.remote_label = f[1];
            e.level = std::stol(f[2]);
            e.weight = std::stoi(f[3]);
            e.fingerprint = parse_longs(f[4], ',');
            table.push_back(e);
        }
    });
    return table;
}

const LabelEntry& find_label(const std::string& label)
{
    for (const auto& e : label_table())
        if (e.label == label || e.remote_label == label) return e;
    throw UnknownLabel("unknown form label '" + label + "'");
}

IngestConfig IngestConfig::defaults()
{
    IngestConfig c;
    const char* url = std::getenv("CYPERIODS_REMOTE_URL");
    c.base_url = url ? url : "https://www.lmfdb.org";
    if (const char* d = std::getenv("CACHE_DIR"))
        c.cache_dir = d;
    else if (const char* h = std::getenv("HOME"))
        c.cache_dir = std::string(h) + "/.cache/cyperiods";
    else
        c.cache_dir = ".cyperiods-cache";
    c.fixture_dir = data_dir() + "/forms";
    if (const char* off = std::getenv("CYPERIODS_OFFLINE")) c.offline = std::string(off) == "1";
    return c;
}

ModularForm parse_form_record(const std::string& text, std::string* remote_label)
{
    ModularForm f;
    bool have_level = false;
    bool have_an = false;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw SanityCheckFailed("form record: no tab in line '" + line.substr(0, 40) + "'");
        std::string key = line.substr(0, tab);
        std::string val = trim(line.substr(tab + 1));
        if (key == "label") {
            f.label = val;
        } else if (key == "lmfdb") {
            if (remote_label) *remote_label = val;
        } else if (key == "level") {
            f.level = std::stol(val);
            have_level = true;
        } else if (key == "weight") {
            f.weight = std::stoi(val);
        } else if (key == "fricke") {
            if (val != "1" && val != "-1" && !val.empty()) throw SanityCheckFailed("form record: bad fricke '" + val + "'");
            if (!val.empty()) f.fricke_sign = std::stoi(val);
        } else if (key == "an") {
            f.coefficients = parse_longs(val, ' ');
            have_an = true;
        }
        // other keys (source, ...) are informational
    }
    if (!have_level || !have_an) throw SanityCheckFailed("form record lacks level or coefficients");
    return f;
}

std::string serialize_form_record(const ModularForm& f, const std::string& remote_label, const std::string& source)
{
    std::ostringstream out;
    out << "label\t" << f.label << '\n';
    out << "lmfdb\t" << remote_label << '\n';
    out << "level\t" << f.level << '\n';
    out << "weight\t" << f.weight << '\n';
    out << "fricke\t" << (f.fricke_sign ? std::to_string(*f.fricke_sign) : "") << '\n';
    out << "source\t" << source << '\n';
    out << "an\t";
    for (std::size_t i = 0; i < f.count(); ++i) out << (i ? " " : "") << f.coefficients[i];
    out << '\n';
    return out.str();
}

CoefficientRecord fetch_coefficients(const std::string& label, std::size_t n_max, const IngestConfig& cfg)
{
    if (n_max == 0) throw std::invalid_argument("fetch_coefficients: n_max must be positive");
    const LabelEntry* entry = nullptr;
    try {
        entry = &find_label(label);
    } catch (const UnknownLabel&) {
        // remote-style labels outside the table are still fetchable
        static const std::regex remote_re(R"(^\d+\.\d+\.[a-z]\.[a-z]+$)");
        if (!std::regex_match(label, remote_re)) throw;
    }
    const std::string key = file_key(entry ? entry->label : label);
    const std::string local = entry ? entry->label : label;
    const std::string remote = entry ? entry->remote_label : label;

    if (!cfg.cache_dir.empty())
        if (auto rec = lookup_cache(cfg.cache_dir, key, n_max)) {
            rec->form.coefficients.resize(std::max(n_max, std::size_t(1)));
            if (entry) check_fingerprint(rec->form, *entry);
            return *rec;
        }

    std::optional<CoefficientRecord> rec;
    std::string network_error;
    if (!cfg.offline) {
        try {
            rec = fetch_remote(remote, n_max, cfg);
            rec->form.label = local;
            if (entry) check_fingerprint(rec->form, *entry);
        } catch (const NetworkError& e) {
            network_error = e.what();
        }
    }
    if (!rec) {
        fs::path fx = fs::path(cfg.fixture_dir) / (key + ".txt");
        if (!fs::exists(fx)) {
            if (!network_error.empty()) throw NetworkError(network_error);
            throw NotFound("no cached or bundled coefficients for " + label + (cfg.offline ? " (offline)" : ""));
        }
        CoefficientRecord r;
        r.form = parse_form_record(read_file(fx), &r.remote_label);
        r.source = Source::fixture;
        if (r.form.count() < n_max)
            throw InsufficientCoefficients("bundled coefficients for " + label + " stop at n = " +
                                           std::to_string(r.form.count()) + ", need " + std::to_string(n_max));
        rec = r;
    }
    rec->form.coefficients.resize(n_max);
    rec->form.validate();
    rec->sha256 = sha256_hex(serialize_form_record(rec->form, rec->remote_label, to_string(rec->source)));
    if (!cfg.cache_dir.empty()) write_cache(cfg.cache_dir, key, *rec, n_max);
    return *rec;
}

ModularForm load_form(const std::string& label, int digits, const IngestConfig& cfg, long for_level)
{
    long level = 0;
    try {
        level = find_label(label).level;
    } catch (const UnknownLabel&) {
        std::smatch m;
        static const std::regex remote_re(R"(^(\d+)\.\d+\.[a-z]\.[a-z]+$)");
        if (!std::regex_match(label, m, remote_re)) throw;
        level = std::stol(m[1]);
    }
    level = std::max(level, for_level);
    double sn = std::sqrt(static_cast<double>(level));
    // Mellin sums up to t = 2N, and the Fricke test point i/(2 sqrt N) at half precision
    std::size_t mellin_n = mellin_terms_needed(Real(2 * level), digits);
    std::size_t fricke_n = static_cast<std::size_t>(std::ceil(1.2 * (digits / 2.0 + 22) * std::log(10.0) * sn / M_PI)) + 50;
    std::size_t n = std::max(mellin_n, fricke_n);
    n = ((n + 99) / 100) * 100;
    return fetch_coefficients(label, n, cfg).form;
}

bool operator_available(const std::string& id)
{
    try {
        load_operator(id);
        return true;
    } catch (const NotFound&) {
        return false;
    }
}

FuchsianOperator load_operator(const std::string& id)
{
    std::vector<fs::path> candidates;
    candidates.push_back(fs::path(data_dir()) / "operators" / (id + ".op"));
    if (const char* d = std::getenv("CYPERIODS_OPERATOR_DIR")) {
        candidates.push_back(fs::path(d) / (id + ".op"));
        candidates.push_back(fs::path(d) / id);
    }
    candidates.emplace_back(id);
    for (const auto& p : candidates) {
        std::error_code ec;
        if (fs::is_regular_file(p, ec)) return parse_operator(read_file(p));
    }
    throw NotFound("operator '" + id + "' is neither bundled nor a readable file");
}

std::vector<const std::vector<std::string>*> FixtureTable::find(const std::string& key) const
{
    std::vector<const std::vector<std::string>*> out;
    for (const auto& r : rows)
        if (!r.empty() && r[0] == key) out.push_back(&r);
    return out;
}

const std::string& FixtureTable::value(const std::string& key) const
{
    for (const auto& r : rows)
        if (r.size() >= 2 && r[0] == key) return r[1];
    throw NotFound(id + ": no row '" + key + "'");
}

std::size_t FixtureTable::column(const std::string& name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return i;
    throw NotFound(id + ": no column '" + name + "'");
}

FixtureTable load_fixture_table(const std::string& id)
{
    static const std::regex id_re(R"(^[A-Za-z0-9]+$)");
    if (!std::regex_match(id, id_re)) throw NotFound("bad table id '" + id + "'");
    fs::path p = fs::path(data_dir()) / "tables" / (id + ".tsv");
    if (!fs::exists(p)) throw NotFound("no fixture table " + id);
    FixtureTable t;
    t.id = id;
    std::istringstream in(read_file(p));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = split(line, '\t');
        if (t.columns.empty())
            t.columns = fields;
        else
            t.rows.push_back(fields);
    }
    return t;
}

}  // namespace cyp
