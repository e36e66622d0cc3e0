#pragma once

#include "fmsilp/model_io.hpp"

#include <string>

#ifndef FMSILP_TEST_DATA
#error "FMSILP_TEST_DATA must name the tests/data directory"
#endif

namespace testing_support {

inline std::string data_path(const std::string& name)
{
    return std::string(FMSILP_TEST_DATA) + "/" + name;
}

inline fmsilp::ModelFile load_data(const std::string& name)
{
    return fmsilp::load_model_file(data_path(name));
}

inline fmsilp::SILPModel load_model(const std::string& name)
{
    return *load_data(name).model;
}

}  // namespace testing_support
