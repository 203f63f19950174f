// Coefficient records (remote, cache, bundled fixtures), operator files and printed tables.
#pragma once

#include "cyperiods/modforms.hpp"
#include "cyperiods/opcore.hpp"

#include <string>
#include <vector>

namespace cyp {

enum class Source { remote, cache, fixture };
std::string to_string(Source s);

struct CoefficientRecord {
    ModularForm form;  // form.label is the short N/i label when known
    std::string remote_label;
    Source source = Source::fixture;
    std::string sha256;  // of the serialized record
};

struct LabelEntry {
    std::string label;         // "6/1"
    std::string remote_label;  // "6.4.a.a"
    long level = 0;
    int weight = 4;
    std::vector<long> fingerprint;  // a_1 .. a_k
};

const std::vector<LabelEntry>& label_table();
/// Accepts either label style; throws UnknownLabel.
const LabelEntry& find_label(const std::string& label);

struct IngestConfig {
    std::string base_url;   // default $CYPERIODS_REMOTE_URL or https://www.lmfdb.org
    std::string cache_dir;  // default $CACHE_DIR or $HOME/.cache/cyperiods
    std::string fixture_dir;
    bool offline = false;
    int timeout_seconds = 15;

    static IngestConfig defaults();
};

/// Cache, then remote (unless offline), then bundled fixture. The result has at least n_max
/// coefficients and is written to the cache. Throws NetworkError, UnknownLabel, SanityCheckFailed,
/// InsufficientCoefficients.
CoefficientRecord fetch_coefficients(const std::string& label, std::size_t n_max,
                                     const IngestConfig& cfg = IngestConfig::defaults());

/// Fetch with n_max sized for `digits` at the form's level, or at `for_level` when larger
/// (twists), with Fricke-detection headroom.
ModularForm load_form(const std::string& label, int digits, const IngestConfig& cfg = IngestConfig::defaults(),
                      long for_level = 0);

/// key<TAB>value record: label, lmfdb, level, weight, fricke, source, an.
ModularForm parse_form_record(const std::string& text, std::string* remote_label = nullptr);
std::string serialize_form_record(const ModularForm& f, const std::string& remote_label, const std::string& source);

std::string sha256_hex(const std::string& data);

/// Bundled id ("8.62"), a file in $CYPERIODS_OPERATOR_DIR, or a path. Throws NotFound.
FuchsianOperator load_operator(const std::string& id);
bool operator_available(const std::string& id);

struct FixtureTable {
    std::string id;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    /// Rows whose first field equals key.
    std::vector<const std::vector<std::string>*> find(const std::string& key) const;
    /// Value of a two-column key/value table; throws NotFound.
    const std::string& value(const std::string& key) const;
    std::size_t column(const std::string& name) const;
};

/// T1, T2, T3, P61, S63, OP862, OP867, M6. Throws NotFound.
FixtureTable load_fixture_table(const std::string& id);

}  // namespace cyp
