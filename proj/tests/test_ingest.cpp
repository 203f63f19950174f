#define CPPHTTPLIB_OPENSSL_SUPPORT  // must match the library build of httplib
#include <doctest.h>

#include "cyperiods/error.hpp"
#include "cyperiods/ingest.hpp"
#include "test_util.hpp"

#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <thread>

#include <unistd.h>

using namespace cyp;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name)
{
    fs::path d = fs::temp_directory_path() / ("cyperiods-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

// Serves the remote newform API from the bundled records; can lie about a_2 on request.
class FakeRemote {
public:
    FakeRemote()
    {
        server_.Get("/api/mf_newforms/", [this](const httplib::Request& req, httplib::Response& res) {
            ++hits;
            std::string label = req.get_param_value("label");
            nlohmann::json out;
            out["data"] = nlohmann::json::array();
            for (const auto& e : label_table()) {
                if (e.remote_label != label) continue;
                auto f = parse_form_record(slurp_file(std::string(CYPERIODS_DATA_DIR) + "/forms/" +
                                                      std::string(e.label).replace(e.label.find('/'), 1, "_") + ".txt"));
                nlohmann::json d;
                d["label"] = label;
                d["level"] = f.level;
                d["weight"] = f.weight;
                d["dim"] = 1;
                d["fricke_eigenval"] = *f.fricke_sign;
                std::vector<long> tr(f.coefficients.begin(), f.coefficients.begin() + 1000);
                if (corrupt) tr[1] += 1;
                d["traces"] = tr;
                out["data"].push_back(d);
            }
            res.set_content(out.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        while (!server_.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    ~FakeRemote()
    {
        server_.stop();
        thread_.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

    std::atomic<int> hits{0};
    bool corrupt = false;

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

}  // namespace

TEST_CASE("label table")
{
    CHECK(find_label("6/1").remote_label == "6.4.a.a");
    CHECK(find_label("17.4.a.a").label == "17/1");
    CHECK(find_label("192/2").level == 192);
    CHECK_THROWS_AS(find_label("7/3"), UnknownLabel);
}

TEST_CASE("form records round-trip")
{
    ModularForm f = test_form("8/1", 30);
    std::string remote;
    ModularForm g = parse_form_record(serialize_form_record(f, "8.4.a.a", "fixture"), &remote);
    CHECK(g.coefficients == f.coefficients);
    CHECK(g.fricke_sign == f.fricke_sign);
    CHECK(g.level == 8);
    CHECK(remote == "8.4.a.a");
    CHECK_THROWS_AS(parse_form_record("label\t1/1\n"), SanityCheckFailed);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("fetch through remote, cache and fixture")
{
    FakeRemote remote;
    IngestConfig cfg = IngestConfig::defaults();
    cfg.base_url = remote.url();
    cfg.cache_dir = fresh_dir("cache").string();
    cfg.timeout_seconds = 5;

    auto r1 = fetch_coefficients("6/1", 200, cfg);
    CHECK(r1.source == Source::remote);
    CHECK(r1.form.a(1) == 1);
    CHECK(r1.form.count() == 200);
    CHECK(r1.form.fricke_sign == 1);
    CHECK(remote.hits == 1);

    auto r2 = fetch_coefficients("6/1", 200, cfg);
    CHECK(r2.source == Source::cache);
    CHECK(r2.form.coefficients == r1.form.coefficients);
    CHECK(r2.sha256 == r1.sha256);
    CHECK(remote.hits == 1);

    // a smaller request is served by the larger entry
    CHECK(fetch_coefficients("6.4.a.a", 50, cfg).source == Source::cache);

    // corrupt cache entries are refetched
    fs::path entry = fs::path(cfg.cache_dir) / "6_1__n200.rec";
    REQUIRE(fs::exists(entry));
    {
        std::string text = slurp_file(entry.string());
        text[text.find("an\t") + 3] = '7';
        std::ofstream(entry, std::ios::binary) << text;
    }
    auto r3 = fetch_coefficients("6/1", 200, cfg);
    CHECK(r3.source == Source::remote);
    CHECK(remote.hits == 2);

    // remote data that disagrees with the label's fingerprint is rejected
    remote.corrupt = true;
    CHECK_THROWS_AS(fetch_coefficients("17/1", 300, cfg), SanityCheckFailed);
    remote.corrupt = false;

    // 17/1 from the remote reproduces L(f,1)
    auto r17 = fetch_coefficients("17/1", 500, cfg);
    CHECK(r17.source == Source::remote);
    PrecisionScope scope(40);
    CHECK(boost::multiprecision::abs(l_value(r17.form, 1, 35) - parse_real("-0.39728313408582654097415526426736028")) <
          Real("1e-34"));

    // remote cannot supply more than it has: the bundled fixture takes over when the network fails
    IngestConfig dead = cfg;
    dead.base_url = "http://127.0.0.1:1";
    dead.timeout_seconds = 1;
    dead.cache_dir = fresh_dir("cache2").string();
    auto r4 = fetch_coefficients("8/1", 100, dead);
    CHECK(r4.source == Source::fixture);

    // offline: cache or fixture only
    IngestConfig off = cfg;
    off.offline = true;
    int before = remote.hits;
    CHECK(fetch_coefficients("6/1", 200, off).source == Source::cache);
    CHECK(fetch_coefficients("12/1", 100, off).source == Source::fixture);
    CHECK(remote.hits == before);
    CHECK_THROWS_AS(fetch_coefficients("6/1", 100000, off), InsufficientCoefficients);
    CHECK_THROWS_AS(fetch_coefficients("5/9", 10, off), UnknownLabel);

    fs::remove_all(cfg.cache_dir);
    fs::remove_all(dead.cache_dir);
}

TEST_CASE("operators and fixture tables")
{
    auto op = load_operator("8.67");
    CHECK(op.max_power() == 8);
    CHECK(op.name == "8.67");
    CHECK_THROWS_AS(load_operator("no-such-operator"), NotFound);
    CHECK(operator_available("8.62"));
    CHECK_FALSE(operator_available("253"));

    auto t3 = load_fixture_table("T3");
    REQUIRE(t3.find("6/1").size() == 1);
    CHECK((*t3.find("6/1")[0])[1] == "0.0705795645108305473225513900913349620339");
    CHECK((*t3.find("6/1")[0])[2] == "0.4969159973924347680403980021800044307499");
    auto t2 = load_fixture_table("T2");
    bool found = false;
    for (const auto& r : t2.rows)
        if (r[0] == "5" && r[1] == "0") {
            found = true;
            CHECK(r[4] == "3.78853747194184773010686231258i");
            CHECK(r[5] == "61.0738884585292464400038239965i");
        }
    CHECK(found);
    auto t1 = load_fixture_table("T1");
    auto row = t1.find("93");
    REQUIRE(row.size() == 1);
    CHECK((*row[0])[1] == "8.42836120319");
    CHECK((*row[0])[2] == "11.1335296603");
    CHECK((*row[0])[3] == "17.3423746625i");
    CHECK(load_fixture_table("OP867").value("ratio_L1") == "-108");
    CHECK_THROWS_AS(load_fixture_table("T9"), NotFound);

    // printed strings survive the big-float layer
    PrecisionScope scope(80);
    for (const auto& r : t3.rows)
        for (std::size_t c = 1; c < r.size(); ++c) {
            std::string sig = r[c].substr(r[c].find_first_not_of("0."));
            CHECK(to_string(parse_real(r[c]), static_cast<int>(sig.size())) == r[c]);
        }
}
