#pragma once

#include <string>
#include <vector>

// Family flag sets covered by tests/golden/classify.txt, in file order.
inline const std::vector<std::vector<std::string>> kGoldenFamilies = {
    {"--family", "power", "--p", "2"},
    {"--family", "power", "--p", "0"},
    {"--family", "quasi_arithmetic", "--f", "ln"},
    {"--family", "quasi_arithmetic", "--f", "power:3"},
    {"--family", "gini", "--p", "2", "--q", "1"},
    {"--family", "gini", "--p", "3", "--q", "3"},
    {"--family", "bajraktarevic", "--f", "power:2", "--g", "power:1"},
    {"--family", "hamy", "--r", "3"},
    {"--family", "sympoly", "--r", "2"},
    {"--family", "biplanar", "--p", "2", "--q", "3", "--c", "3", "--d", "3"},
    {"--family", "biplanar", "--p", "0", "--q", "1", "--c", "2", "--d", "1"},
    {"--family", "median"},
    {"--family", "median", "--kind", "upper"},
    {"--family", "piecewise_h"},
    {"--family", "cube_over_square"},
};
