// Copyright 2026 The qvolume Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qvolume/matrix_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "qvolume/errors.hpp"

namespace qvolume {

namespace {

double parse_real(std::string_view text, std::string_view whole) {
    if (text.empty()) {
        throw InvalidInput("matrix text: empty number in '" + std::string(whole) + "'");
    }
    // std::from_chars rejects a leading '+'.
    if (text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw InvalidInput("matrix text: cannot parse '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

std::string format_complex(Complex z) {
    char buf[64];
    // Adding +0.0 turns negative zeros into positive ones.
    const double re = z.real() + 0.0;
    const double im = z.imag() + 0.0;
    char sign = std::signbit(im) ? '-' : '+';
    std::snprintf(buf, sizeof(buf), "%.17g%c%.17gj", re, sign, std::fabs(im));
    return buf;
}

Complex parse_complex(std::string_view token) {
    if (token.empty()) {
        throw InvalidInput("matrix text: empty entry");
    }
    if (token.back() != 'j' && token.back() != 'i') {
        return {parse_real(token, token), 0.0};
    }
    std::string_view body = token.substr(0, token.size() - 1);
    // The split point is the last sign that is not the leading sign and not part of an exponent.
    size_t split = std::string_view::npos;
    for (size_t k = body.size(); k-- > 1;) {
        char c = body[k];
        if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string_view::npos) {
        std::string_view imag = body;
        if (imag.empty() || imag == "+" || imag == "-") {
            return {0.0, imag == "-" ? -1.0 : 1.0};
        }
        return {0.0, parse_real(imag, token)};
    }
    std::string_view imag = body.substr(split);
    double im = (imag == "+" || imag == "-") ? (imag == "-" ? -1.0 : 1.0) : parse_real(imag, token);
    return {parse_real(body.substr(0, split), token), im};
}

void write_matrix(std::ostream &out, const ComplexMatrix &m) {
    out << m.rows() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) {
                out << ' ';
            }
            out << format_complex(m(r, c));
        }
        out << '\n';
    }
}

ComplexMatrix read_matrix(std::istream &in) {
    std::ostringstream filtered;
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first != std::string::npos && line[first] == '#') {
            continue;
        }
        filtered << line << '\n';
    }
    std::istringstream tokens(filtered.str());

    std::string token;
    if (!(tokens >> token)) {
        throw InvalidInput("matrix text: missing dimension line");
    }
    int n = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), n);
    if (ec != std::errc() || ptr != token.data() + token.size() || n <= 0) {
        throw InvalidInput("matrix text: invalid dimension '" + token + "'");
    }
    ComplexMatrix m(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (!(tokens >> token)) {
                throw InvalidInput(
                    "matrix text: expected " + std::to_string(n * n) + " entries, got " + std::to_string(r * n + c));
            }
            m(r, c) = parse_complex(token);
        }
    }
    if (tokens >> token) {
        throw InvalidInput("matrix text: trailing data '" + token + "'");
    }
    return m;
}

}  // namespace qvolume
