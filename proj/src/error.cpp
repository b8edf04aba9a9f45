#include "tmqi/error.hpp"

namespace tmqi {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kInvalidImage: return "InvalidImage";
    case Errc::kConstantImage: return "ConstantImage";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kImageTooSmall: return "ImageTooSmall";
    case Errc::kDomainError: return "DomainError";
    case Errc::kIo: return "IoError";
    case Errc::kBadMagic: return "BadMagic";
    case Errc::kBadHeader: return "BadHeader";
    case Errc::kUnsupportedOrientation: return "UnsupportedOrientation";
    case Errc::kTruncatedScanline: return "TruncatedScanline";
    case Errc::kBadRleRun: return "BadRleRun";
    case Errc::kNonFiniteSample: return "NonFiniteSample";
    case Errc::kMaxvalUnsupported: return "MaxvalUnsupported";
    case Errc::kBitDepthUnsupported: return "BitDepthUnsupported";
    case Errc::kManifestInvalid: return "ManifestInvalid";
    case Errc::kLengthMismatch: return "LengthMismatch";
    case Errc::kTooFewItems: return "TooFewItems";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

}  // namespace tmqi
