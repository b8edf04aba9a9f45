#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tmqi {

// Every failure the library reports carries one of these codes. The CLI maps
// them onto exit statuses, so the set is part of the public contract.
enum class Errc {
  kInvalidImage,
  kConstantImage,
  kDimensionMismatch,
  kImageTooSmall,
  kDomainError,
  kIo,
  kBadMagic,
  kBadHeader,
  kUnsupportedOrientation,
  kTruncatedScanline,
  kBadRleRun,
  kNonFiniteSample,
  kMaxvalUnsupported,
  kBitDepthUnsupported,
  kManifestInvalid,
  kLengthMismatch,
  kTooFewItems,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail);

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace tmqi
