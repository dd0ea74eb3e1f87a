#pragma once

#include <stdexcept>
#include <string>

namespace strahler {

// Guarded enumeration would produce more results than the caller's cap.
class cap_exceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An ensemble table was queried beyond the n it was built for.
class n_max_exceeded : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Corpus ships sentence structures without word forms; refuse text export.
class wordless_corpus : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class empty_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace strahler
