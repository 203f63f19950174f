#pragma once

#include <stdexcept>
#include <string>

namespace cyp {

/// Base of every error raised by the library. `kind()` is the stable name used by the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what) : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class SyntaxError : public Error {
public:
    SyntaxError(int line, int column, const std::string& what)
        : Error("SyntaxError", "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column)
    {
    }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

#define CYP_DEFINE_ERROR(Name)                                                 \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(#Name, what) {}         \
    }

CYP_DEFINE_ERROR(OrderError);
CYP_DEFINE_ERROR(RootIsolationFailure);
CYP_DEFINE_ERROR(CenterSingular);
CYP_DEFINE_ERROR(NotConifold);
CYP_DEFINE_ERROR(NotMUM);
CYP_DEFINE_ERROR(ResonanceFailure);
CYP_DEFINE_ERROR(OutsideDisk);
CYP_DEFINE_ERROR(PrecisionLoss);
CYP_DEFINE_ERROR(IllConditioned);
CYP_DEFINE_ERROR(PathTooClose);
CYP_DEFINE_ERROR(RankError);
CYP_DEFINE_ERROR(InsufficientCoefficients);
CYP_DEFINE_ERROR(AmbiguousSign);
CYP_DEFINE_ERROR(UnknownSign);
CYP_DEFINE_ERROR(LevelInvalid);
CYP_DEFINE_ERROR(RecognitionFailed);
CYP_DEFINE_ERROR(PrecisionTooLow);
CYP_DEFINE_ERROR(NetworkError);
CYP_DEFINE_ERROR(UnknownLabel);
CYP_DEFINE_ERROR(SanityCheckFailed);
CYP_DEFINE_ERROR(NotFound);

#undef CYP_DEFINE_ERROR

}  // namespace cyp
