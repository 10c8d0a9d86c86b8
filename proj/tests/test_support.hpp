#pragma once

#include "koszulhh/algebra.hpp"

#include <fstream>
#include <sstream>
#include <string>

inline std::string read_data(const std::string& name)
{
    std::ifstream in(std::string(KOSZULHH_TEST_DATA) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline koszulhh::SpecDocument load_data(const std::string& name) { return koszulhh::parse_spec(read_data(name)); }
