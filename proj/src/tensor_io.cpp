#include "rtc/tensor_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include <json.hpp>

namespace rtc {

namespace {

using nlohmann::json;

std::uint64_t to_little_endian(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int b = 0; b < 8; ++b)
            r |= ((v >> (8 * b)) & 0xffU) << (8 * (7 - b));
        return r;
    }
    return v;
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw IoError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

} // namespace

void write_tensor_file(const std::filesystem::path& path, const TensorFile& file) {
    const Tensor3& t = file.tensor;
    if (t.empty())
        throw InvalidArgument("cannot write an empty tensor");
    if (!t.all_finite())
        throw InvalidArgument("tensor contains non-finite values");

    const json header = {
        {"dims", {t.n1(), t.n2(), t.n3()}},
        {"dtype", "f64"},
        {"order", "slice-major"},
        {"units", file.units},
        {"seed-provenance", file.provenance},
    };
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot create " + path.string());
    out << header.dump() << '\n';

    std::vector<std::uint64_t> words(static_cast<std::size_t>(t.size()));
    for (std::size_t e = 0; e < words.size(); ++e)
        words[e] = to_little_endian(std::bit_cast<std::uint64_t>(t.values()[e]));
    out.write(reinterpret_cast<const char*>(words.data()), static_cast<std::streamsize>(words.size() * 8));
    if (!out)
        throw IoError("failed writing " + path.string());
}

TensorFile read_tensor_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw IoError("missing header in " + path.string());

    json header;
    try {
        header = json::parse(line);
    } catch (const json::exception& e) {
        throw IoError("malformed tensor header in " + path.string() + ": " + e.what());
    }
    Dims d;
    TensorFile file;
    try {
        const auto& dims = header.at("dims");
        if (!dims.is_array() || dims.size() != 3)
            throw IoError("tensor header dims must have three entries");
        d = Dims{dims[0].get<Index>(), dims[1].get<Index>(), dims[2].get<Index>()};
        if (header.at("dtype").get<std::string>() != "f64")
            throw IoError("unsupported dtype in " + path.string());
        if (header.at("order").get<std::string>() != "slice-major")
            throw IoError("unsupported storage order in " + path.string());
        file.units = header.value("units", "");
        file.provenance = header.value("seed-provenance", "");
    } catch (const json::exception& e) {
        throw IoError("invalid tensor header in " + path.string() + ": " + e.what());
    }
    if (d.n1 < 1 || d.n2 < 1 || d.n3 < 1)
        throw IoError("tensor header has non-positive dimensions");

    std::vector<std::uint64_t> words(static_cast<std::size_t>(d.size()));
    in.read(reinterpret_cast<char*>(words.data()), static_cast<std::streamsize>(words.size() * 8));
    if (in.gcount() != static_cast<std::streamsize>(words.size() * 8))
        throw IoError("payload shorter than header dims in " + path.string());
    if (in.peek() != std::char_traits<char>::eof())
        throw IoError("payload longer than header dims in " + path.string());

    std::vector<double> values(words.size());
    for (std::size_t e = 0; e < words.size(); ++e)
        values[e] = std::bit_cast<double>(to_little_endian(words[e]));
    file.tensor = Tensor3(d, std::move(values));
    if (!file.tensor.all_finite())
        throw IoError("tensor file contains non-finite values: " + path.string());
    return file;
}

void write_mask_file(const std::filesystem::path& path, const SampleMask& mask) {
    json indices = json::array();
    for (const auto& [i, j] : mask.true_indices())
        indices.push_back({i, j});
    const json doc = {{"n1", mask.n1()}, {"n2", mask.n2()}, {"true_indices", indices}};
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot create " + path.string());
    out << doc.dump() << '\n';
    if (!out)
        throw IoError("failed writing " + path.string());
}

SampleMask read_mask_file(const std::filesystem::path& path) {
    const json doc = read_json(path);
    try {
        const Index n1 = doc.at("n1").get<Index>();
        const Index n2 = doc.at("n2").get<Index>();
        std::vector<std::pair<Index, Index>> indices;
        for (const auto& entry : doc.at("true_indices")) {
            if (!entry.is_array() || entry.size() != 2)
                throw IoError("mask index entries must be [i, j] pairs");
            indices.emplace_back(entry[0].get<Index>(), entry[1].get<Index>());
        }
        return SampleMask::from_indices(n1, n2, indices);
    } catch (const json::exception& e) {
        throw IoError("invalid mask file " + path.string() + ": " + e.what());
    } catch (const InvalidArgument& e) {
        throw IoError("invalid mask file " + path.string() + ": " + e.what());
    }
}

} // namespace rtc
