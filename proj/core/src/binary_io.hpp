#pragma once

#include "manuscriptor/errors.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

namespace manuscriptor::detail {

// Little-endian writer/reader for the snapshot section formats.
class ByteWriter {
public:
    void magic(std::string_view m) { out_.append(m); }

    void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }

    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
    }

    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        out_.append(s);
    }

    std::string take() { return std::move(out_); }

private:
    std::string out_;
};

class ByteReader {
public:
    explicit ByteReader(std::string_view data) : data_(data) {}

    void expect_magic(std::string_view m) {
        if (data_.substr(pos_, m.size()) != m) throw FormatError("bad magic, expected " + std::string(m));
        pos_ += m.size();
    }

    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(data_[pos_++]);
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        }
        pos_ += 4;
        return v;
    }

    float f32() { return std::bit_cast<float>(u32()); }

    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s(data_.substr(pos_, n));
        pos_ += n;
        return s;
    }

    bool at_end() const { return pos_ == data_.size(); }

    void expect_end() const {
        if (!at_end()) throw FormatError("trailing bytes after last record");
    }

private:
    void need(std::size_t n) const {
        if (data_.size() - pos_ < n) throw FormatError("truncated data");
    }

    std::string_view data_;
    std::size_t pos_ = 0;
};

}  // namespace manuscriptor::detail
