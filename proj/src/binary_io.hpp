#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "error.hpp"
#include "matrix.hpp"

namespace fz {

// Little-endian byte buffer helpers shared by the .frz and checkpoint codecs.

class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u16(std::uint16_t v) { raw_le(v); }
    void u32(std::uint32_t v) { raw_le(v); }
    void u64(std::uint64_t v) { raw_le(v); }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        raw_le(bits);
    }
    void bytes(const void* p, std::size_t n) {
        const char* c = static_cast<const char*>(p);
        buf_.insert(buf_.end(), c, c + n);
    }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes(s.data(), s.size());
    }
    void matrix(const Matrix& m) {
        u32(static_cast<std::uint32_t>(m.rows()));
        u32(static_cast<std::uint32_t>(m.cols()));
        for (std::size_t i = 0; i < m.size(); ++i) f64(m.data()[i]);
    }

    const std::vector<char>& buffer() const { return buf_; }

private:
    template <typename T>
    void raw_le(T v) {
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
        }
    }

    std::vector<char> buf_;
};

class ByteReader {
public:
    ByteReader(const std::vector<char>& buf, std::string source)
        : buf_(buf), source_(std::move(source)) {}

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return buf_.size() - pos_; }

    std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
    std::uint16_t u16() { return read_le<std::uint16_t>(); }
    std::uint32_t u32() { return read_le<std::uint32_t>(); }
    std::uint64_t u64() { return read_le<std::uint64_t>(); }
    double f64() {
        const std::uint64_t bits = read_le<std::uint64_t>();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    std::string str() {
        const std::uint32_t n = u32();
        const char* p = take(n);
        return std::string(p, n);
    }
    Matrix matrix() {
        const std::uint32_t rows = u32();
        const std::uint32_t cols = u32();
        if (rows == 0 || cols == 0) {
            throw FormatError(source_ + ": zero matrix dimension at byte offset " +
                              std::to_string(pos_));
        }
        Matrix m(rows, cols);
        for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = f64();
        return m;
    }
    void expect_magic(const char* magic8) {
        const char* p = take(8);
        if (std::memcmp(p, magic8, 8) != 0) {
            throw FormatError(source_ + ": bad magic at byte offset 0, expected '" +
                              std::string(magic8, 8) + "'");
        }
    }
    void expect_end() {
        if (pos_ != buf_.size()) {
            throw FormatError(source_ + ": " + std::to_string(buf_.size() - pos_) +
                              " trailing bytes at offset " + std::to_string(pos_));
        }
    }

private:
    const char* take(std::size_t n) {
        if (pos_ + n > buf_.size()) {
            throw FormatError(source_ + ": truncated at byte offset " + std::to_string(pos_) +
                              " (need " + std::to_string(n) + " bytes, have " +
                              std::to_string(buf_.size() - pos_) + ")");
        }
        const char* p = buf_.data() + pos_;
        pos_ += n;
        return p;
    }

    template <typename T>
    T read_le() {
        const char* p = take(sizeof(T));
        T v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            v |= static_cast<T>(static_cast<unsigned char>(p[i])) << (8 * i);
        }
        return v;
    }

    const std::vector<char>& buf_;
    std::string source_;
    std::size_t pos_ = 0;
};

std::vector<char> read_file_bytes(const std::string& path);

/// Writes to a temp file in the target directory, then renames — on failure
/// no partial artifact is left at the destination.
void write_file_atomic(const std::string& path, const std::vector<char>& bytes);
void write_file_atomic(const std::string& path, const std::string& text);

} // namespace fz
