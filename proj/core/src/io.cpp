#include "gradtomo/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string_view>

#include "gradtomo/errors.hpp"

namespace gradtomo::io {

namespace {

constexpr std::string_view kSinogramMagic = "SINO1";
constexpr std::string_view kImageMagic = "IMGF1";

template <typename Word>
void put_le(std::string& buf, Word word) {
    for (std::size_t i = 0; i < sizeof(Word); ++i) buf.push_back(static_cast<char>((word >> (8 * i)) & 0xFFu));
}

void put_u32(std::string& buf, std::uint32_t v) { put_le(buf, v); }
void put_f64(std::string& buf, double v) { put_le(buf, std::bit_cast<std::uint64_t>(v)); }
void put_f32(std::string& buf, double v) { put_le(buf, std::bit_cast<std::uint32_t>(static_cast<float>(v))); }

class Reader {
public:
    Reader(std::string bytes, std::string what) : bytes_(std::move(bytes)), what_(std::move(what)) {}

    std::size_t size() const { return bytes_.size(); }

    void require(std::size_t total) const {
        if (bytes_.size() < total)
            throw FormatError("truncated " + what_ + ": expected " + std::to_string(total) + " bytes, got " +
                              std::to_string(bytes_.size()));
    }

    void expect_magic(std::string_view magic) {
        require(pos_ + magic.size());
        if (std::string_view(bytes_).substr(pos_, magic.size()) != magic)
            throw FormatError("bad magic in " + what_ + ": expected \"" + std::string(magic) + "\"");
        pos_ += magic.size();
    }

    template <typename Word>
    Word get_le() {
        require(pos_ + sizeof(Word));
        Word w = 0;
        for (std::size_t i = 0; i < sizeof(Word); ++i)
            w |= static_cast<Word>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += sizeof(Word);
        return w;
    }

    std::uint32_t u32() { return get_le<std::uint32_t>(); }
    double f64() { return std::bit_cast<double>(get_le<std::uint64_t>()); }
    double f32() { return static_cast<double>(std::bit_cast<float>(get_le<std::uint32_t>())); }

    std::size_t position() const { return pos_; }

    void expect_end(std::size_t total) const {
        require(total);
        if (bytes_.size() != total)
            throw FormatError(what_ + " has trailing data: expected " + std::to_string(total) + " bytes, got " +
                              std::to_string(bytes_.size()));
    }

private:
    std::string bytes_;
    std::string what_;
    std::size_t pos_ = 0;
};

std::string slurp(std::istream& in) {
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_bytes(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return in;
}

void write_pgm16(const std::filesystem::path& path, std::size_t n, const std::vector<std::uint16_t>& levels) {
    std::string bytes = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n65535\n";
    for (auto v : levels) {
        bytes.push_back(static_cast<char>(v >> 8));
        bytes.push_back(static_cast<char>(v & 0xFF));
    }
    write_bytes(path, bytes);
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
    return std::filesystem::path(path.string() + ".range");
}

}  // namespace

void write_sinogram(std::ostream& out, const Sinogram& sino) {
    std::string buf(kSinogramMagic);
    put_u32(buf, kSinogramVersion);
    put_u32(buf, static_cast<std::uint32_t>(sino.n_angles()));
    put_u32(buf, static_cast<std::uint32_t>(sino.n_s()));
    put_f64(buf, sino.detector().spacing);
    for (double phi : sino.angles().values()) put_f64(buf, phi);
    for (double v : sino.values()) put_f32(buf, v);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

Sinogram read_sinogram(std::istream& in) {
    Reader r(slurp(in), "sinogram file");
    r.expect_magic(kSinogramMagic);
    const std::uint32_t version = r.u32();
    if (version != kSinogramVersion)
        throw FormatError("unsupported sinogram file version " + std::to_string(version));
    const std::size_t n_angles = r.u32();
    const std::size_t n_s = r.u32();
    const double spacing = r.f64();
    if (n_angles == 0 || n_s < 2 || !(spacing > 0.0)) throw FormatError("sinogram header has invalid dimensions");
    const std::size_t total = r.position() + 8 * n_angles + 4 * n_angles * n_s;
    r.expect_end(total);
    std::vector<double> angles(n_angles);
    for (auto& phi : angles) phi = r.f64();
    std::vector<double> data(n_angles * n_s);
    for (auto& v : data) v = r.f32();
    return Sinogram(AngleSet(std::move(angles)), DetectorGrid(n_s, spacing), std::move(data));
}

void write_sinogram(const std::filesystem::path& path, const Sinogram& sino) {
    std::ostringstream out;
    write_sinogram(out, sino);
    write_bytes(path, out.str());
}

Sinogram read_sinogram(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_sinogram(in);
}

void write_image(std::ostream& out, const ImageGrid& img) {
    std::string buf(kImageMagic);
    put_u32(buf, static_cast<std::uint32_t>(img.n()));
    put_f64(buf, img.pixel_size());
    for (double v : img.values()) put_f32(buf, v);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

ImageGrid read_image(std::istream& in) {
    Reader r(slurp(in), "image file");
    r.expect_magic(kImageMagic);
    const std::size_t n = r.u32();
    const double pixel_size = r.f64();
    if (n < 2 || !(pixel_size > 0.0)) throw FormatError("image header has invalid dimensions");
    r.expect_end(r.position() + 4 * n * n);
    std::vector<double> data(n * n);
    for (auto& v : data) v = r.f32();
    return ImageGrid(GridSpec{n, pixel_size}, std::move(data));
}

void write_image(const std::filesystem::path& path, const ImageGrid& img) {
    std::ostringstream out;
    write_image(out, img);
    write_bytes(path, out.str());
}

ImageGrid read_image(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_image(in);
}

ImageGrid edge_map_to_image(const EdgeMap& edges, double pixel_size) {
    std::vector<double> data(edges.values().begin(), edges.values().end());
    return ImageGrid(GridSpec{edges.n(), pixel_size}, std::move(data));
}

EdgeMap edge_map_from_image(const ImageGrid& img) {
    std::vector<std::uint8_t> data(img.values().size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double v = img.values()[i];
        if (v != 0.0 && v != 1.0) throw FormatError("edge map image holds a value other than 0 or 1");
        data[i] = v == 1.0 ? 1 : 0;
    }
    return EdgeMap(img.n(), std::move(data));
}

Sinogram import_sinogram_csv(std::istream& in, double s_spacing) {
    std::vector<double> data;
    std::size_t width = 0;
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        ++rows;
        std::size_t count = 0;
        std::stringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(field, &used);
                if (field.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(field);
                data.push_back(v);
            } catch (const std::exception&) {
                throw FormatError("CSV row " + std::to_string(rows) + ": cannot parse \"" + field + "\"");
            }
            ++count;
        }
        if (rows == 1) {
            width = count;
        } else if (count != width) {
            throw FormatError("CSV row " + std::to_string(rows) + " has " + std::to_string(count) +
                              " values, expected " + std::to_string(width));
        }
    }
    if (rows == 0) throw FormatError("CSV sinogram is empty");
    return Sinogram(AngleSet::evenly_distributed(rows), DetectorGrid(width, s_spacing), std::move(data));
}

Sinogram import_sinogram_csv(const std::filesystem::path& path, double s_spacing) {
    auto in = open_input(path);
    return import_sinogram_csv(in, s_spacing);
}

void export_view(const ImageGrid& img, const std::filesystem::path& path) {
    const auto values = img.values();
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    std::vector<std::uint16_t> levels(values.size(), 32768);
    if (hi > lo) {
        for (std::size_t i = 0; i < values.size(); ++i)
            levels[i] = static_cast<std::uint16_t>(std::lround((values[i] - lo) / (hi - lo) * 65535.0));
    }
    write_pgm16(path, img.n(), levels);
    std::ostringstream range;
    range.precision(17);
    range << lo << ' ' << hi << '\n';
    write_bytes(sidecar_path(path), range.str());
}

void export_view(const EdgeMap& edges, const std::filesystem::path& path) {
    std::vector<std::uint16_t> levels(edges.values().size());
    for (std::size_t i = 0; i < levels.size(); ++i) levels[i] = edges.values()[i] ? 65535 : 0;
    write_pgm16(path, edges.n(), levels);
}

ImageGrid read_view(const std::filesystem::path& path, double pixel_size) {
    auto in = open_input(path);
    std::string magic;
    std::size_t width = 0;
    std::size_t height = 0;
    unsigned maxval = 0;
    in >> magic >> width >> height >> maxval;
    in.get();
    if (magic != "P5" || width != height || maxval != 65535) throw FormatError("not a square 16-bit PGM: " + path.string());
    std::vector<double> data(width * height);
    for (auto& v : data) {
        const int hi = in.get();
        const int lo = in.get();
        if (!in) throw FormatError("truncated PGM payload in " + path.string());
        v = static_cast<double>((hi << 8) | lo);
    }
    double min = 0.0;
    double max = 0.0;
    auto range = open_input(sidecar_path(path));
    if (!(range >> min >> max)) throw FormatError("unreadable range sidecar for " + path.string());
    for (auto& v : data) v = max > min ? min + v / 65535.0 * (max - min) : min;
    return ImageGrid(GridSpec{width, pixel_size}, std::move(data));
}

}  // namespace gradtomo::io
