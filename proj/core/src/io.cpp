#include "gradratio/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "gradratio/errors.hpp"

namespace gradratio {

namespace {

namespace fs = std::filesystem;

/// Writes through a sibling temp file and renames into place.
class AtomicFile {
  public:
    explicit AtomicFile(const std::string& path) : final_path_(path) {
        tmp_path_ = path + ".tmp." + std::to_string(::getpid());
        stream_.open(tmp_path_, std::ios::binary | std::ios::trunc);
        if (!stream_)
            throw io_error("cannot open for writing: " + tmp_path_);
    }

    ~AtomicFile() {
        if (!committed_) {
            stream_.close();
            std::error_code ec;
            fs::remove(tmp_path_, ec);
        }
    }

    std::ofstream& stream() { return stream_; }

    void commit() {
        stream_.flush();
        if (!stream_) throw io_error("write failed: " + tmp_path_);
        stream_.close();
        std::error_code ec;
        fs::rename(tmp_path_, final_path_, ec);
        if (ec) throw io_error("rename failed: " + final_path_);
        committed_ = true;
    }

  private:
    std::string final_path_;
    std::string tmp_path_;
    std::ofstream stream_;
    bool committed_ = false;
};

void write_f64_block(std::ofstream& os, const double* p, std::size_t n) {
    os.write(reinterpret_cast<const char*>(p),
             static_cast<std::streamsize>(n * sizeof(double)));
}

void write_imgf64(const double* p, std::size_t rows, std::size_t cols,
                  const std::string& path) {
    AtomicFile out(path);
    out.stream() << "IMGF64 v1 " << rows << " " << cols << "\n";
    write_f64_block(out.stream(), p, rows * cols);
    out.commit();
}

struct ImgHeader {
    std::size_t rows = 0, cols = 0;
};

ImgHeader read_imgf64_header(std::ifstream& is, const std::string& path) {
    std::string line;
    if (!std::getline(is, line))
        throw io_error("cannot read header: " + path);
    std::istringstream hs(line);
    std::string magic, version;
    ImgHeader h;
    hs >> magic >> version >> h.rows >> h.cols;
    if (!hs || magic != "IMGF64" || version != "v1" || h.rows == 0 ||
        h.cols == 0)
        throw io_error("not an IMGF64 v1 file: " + path);
    return h;
}

void read_f64_block(std::ifstream& is, double* p, std::size_t n,
                    const std::string& path) {
    is.read(reinterpret_cast<char*>(p),
            static_cast<std::streamsize>(n * sizeof(double)));
    if (is.gcount() != static_cast<std::streamsize>(n * sizeof(double)))
        throw io_error("truncated payload: " + path);
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(p[i]))
            throw io_error("non-finite entries in: " + path);
}

} // namespace

void write_image(const Image& img, const std::string& path) {
    write_imgf64(img.data.data(), img.height, img.width, path);
}

Image read_image(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open: " + path);
    const ImgHeader h = read_imgf64_header(is, path);
    Image img(static_cast<int>(h.rows), static_cast<int>(h.cols));
    read_f64_block(is, img.data.data(), img.size(), path);
    return img;
}

void write_sinogram(const Sinogram& f, const std::string& path) {
    write_imgf64(f.data.data(), f.detectors, f.angles, path);
}

Sinogram read_sinogram(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open: " + path);
    const ImgHeader h = read_imgf64_header(is, path);
    Sinogram f(static_cast<int>(h.rows), static_cast<int>(h.cols));
    read_f64_block(is, f.data.data(), f.size(), path);
    f.geometry.detector_count = f.detectors;
    f.geometry.angle_count = f.angles;
    return f;
}

void write_projector(const SparseProjector& A, const std::string& path) {
    AtomicFile out(path);
    out.stream() << "SPARSEPROJ v1 " << A.rows << " " << A.cols << " "
                 << A.nnz() << "\n";
    for (std::size_t r = 0; r < A.rows; ++r) {
        for (std::size_t k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k) {
            const std::uint64_t row = r;
            const std::uint64_t col = A.col[k];
            const double w = A.val[k];
            out.stream().write(reinterpret_cast<const char*>(&row), 8);
            out.stream().write(reinterpret_cast<const char*>(&col), 8);
            out.stream().write(reinterpret_cast<const char*>(&w), 8);
        }
    }
    out.commit();
}

SparseProjector read_projector(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open: " + path);
    std::string line;
    if (!std::getline(is, line))
        throw io_error("cannot read header: " + path);
    std::istringstream hs(line);
    std::string magic, version;
    std::uint64_t rows = 0, cols = 0, nnz = 0;
    hs >> magic >> version >> rows >> cols >> nnz;
    if (!hs || magic != "SPARSEPROJ" || version != "v1" || rows == 0 ||
        cols == 0)
        throw io_error("not a SPARSEPROJ v1 file: " + path);

    std::vector<std::uint64_t> tr(nnz), tc(nnz);
    std::vector<double> tv(nnz);
    for (std::uint64_t i = 0; i < nnz; ++i) {
        is.read(reinterpret_cast<char*>(&tr[i]), 8);
        is.read(reinterpret_cast<char*>(&tc[i]), 8);
        is.read(reinterpret_cast<char*>(&tv[i]), 8);
        if (!is) throw io_error("truncated payload: " + path);
        if (tr[i] >= rows || tc[i] >= cols)
            throw io_error("triplet out of range in: " + path);
        if (!std::isfinite(tv[i]))
            throw io_error("non-finite weight in: " + path);
    }

    SparseProjector A;
    A.rows = rows;
    A.cols = cols;
    A.row_ptr.assign(rows + 1, 0);
    for (std::uint64_t i = 0; i < nnz; ++i) ++A.row_ptr[tr[i] + 1];
    for (std::size_t r = 0; r < rows; ++r) A.row_ptr[r + 1] += A.row_ptr[r];
    A.col.assign(nnz, 0);
    A.val.assign(nnz, 0.0);
    std::vector<std::size_t> next(A.row_ptr.begin(), A.row_ptr.end() - 1);
    for (std::uint64_t i = 0; i < nnz; ++i) { // stable within each row
        const std::size_t dst = next[tr[i]]++;
        A.col[dst] = static_cast<std::uint32_t>(tc[i]);
        A.val[dst] = tv[i];
    }
    build_transpose_index(A);
    return A;
}

void write_trace_csv(const ConvergenceTrace& trace, const std::string& path) {
    AtomicFile out(path);
    auto& os = out.stream();
    os << "iter,objective,lagrangian,rel_change,h_norm";
    if (trace.has_rmse) os << ",rmse";
    os << ",seconds\n";
    os.precision(17);
    for (std::size_t i = 0; i < trace.size(); ++i) {
        os << i << "," << trace.objective[i] << "," << trace.lagrangian[i]
           << "," << trace.rel_change[i] << "," << trace.h_norm[i];
        if (trace.has_rmse) os << "," << trace.rmse[i];
        os << "," << trace.seconds[i] << "\n";
    }
    out.commit();
}

void write_pgm16(const Image& img, const std::string& path, double window_lo,
                 double window_hi) {
    if (!(window_lo < window_hi))
        throw std::invalid_argument("write_pgm16: need window lo < hi");
    AtomicFile out(path);
    out.stream() << "P5\n" << img.width << " " << img.height << "\n65535\n";
    const double scale = 65535.0 / (window_hi - window_lo);
    for (double v : img.data) {
        double t = (v - window_lo) * scale;
        t = t < 0.0 ? 0.0 : (t > 65535.0 ? 65535.0 : t);
        const auto q = static_cast<std::uint16_t>(std::lround(t));
        // PGM stores the most significant byte first.
        const unsigned char bytes[2] = {
            static_cast<unsigned char>(q >> 8),
            static_cast<unsigned char>(q & 0xff)};
        out.stream().write(reinterpret_cast<const char*>(bytes), 2);
    }
    out.commit();
}

} // namespace gradratio
