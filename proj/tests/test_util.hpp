#pragma once

#include "cyperiods/ingest.hpp"
#include "cyperiods/opcore.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

inline std::string slurp_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline cyp::FuchsianOperator bundled_operator(const std::string& id)
{
    return cyp::parse_operator(slurp_file(std::string(CYPERIODS_DATA_DIR) + "/operators/" + id + ".op"));
}

// offline, with a throwaway cache so tests never touch the network or $HOME
inline cyp::IngestConfig test_ingest_config()
{
    cyp::IngestConfig c = cyp::IngestConfig::defaults();
    c.offline = true;
    c.cache_dir = (std::filesystem::temp_directory_path() / "cyperiods-test-cache").string();
    return c;
}

inline cyp::ModularForm test_form(const std::string& label, int digits = 60)
{
    return cyp::load_form(label, digits, test_ingest_config());
}
