#pragma once

#include <stdexcept>
#include <string>

namespace x0p {

enum class Errc {
    DomainMismatch,
    Degenerate,
    NotPIntegral,
    InvalidDiscriminant,
    OutOfDomain,
    Internal,
    Schema,
    Invariant,
    NotOnCurve,
    NotFound,
    Fetch,
    Parse,
    InsufficientData,
    BadPrime,
    NonConvergent,
    NoHeegnerForm,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
  public:
    Error(Errc c, const std::string& what) : std::runtime_error(what), code_(c) {}
    Errc code() const { return code_; }

  private:
    Errc code_;
};

}  // namespace x0p
