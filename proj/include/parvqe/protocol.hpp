#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace parvqe {

// Framed wire protocol: magic "QV", version 0x01, 1-byte message type,
// 4-byte big-endian payload length, payload. Payload scalars are big-endian;
// floats are 8-byte IEEE-754 big-endian.

constexpr uint8_t kFrameMagic0 = 'Q';
constexpr uint8_t kFrameMagic1 = 'V';
constexpr uint8_t kFrameVersion = 0x01;
constexpr size_t kFrameHeaderSize = 8;

enum class MessageType : uint8_t { Request = 0x01, Result = 0x02, Shutdown = 0x03 };

enum class JobKind : uint8_t {
    Ping = 0,
    LoadProblem = 1,
    EvaluateEnergy = 2,
    EvaluateBatchElement = 3,
    Shutdown = 4,
};

struct JobRequest {
    uint64_t job_id = 0;
    JobKind kind = JobKind::Ping;
    std::vector<double> theta;         // EvaluateEnergy / EvaluateBatchElement
    std::string problem_hamiltonian;   // LoadProblem
    std::string problem_circuit;       // LoadProblem

    friend bool operator==(const JobRequest&, const JobRequest&) = default;
};

enum class JobStatus : uint8_t {
    Ok = 0,
    NoProblemLoaded = 1,
    EvaluationFailed = 2,
    BadRequest = 3,
};

struct JobResult {
    uint64_t job_id = 0;
    JobKind kind = JobKind::Ping;
    JobStatus status = JobStatus::Ok;
    double energy = 0.0;

    friend bool operator==(const JobResult&, const JobResult&) = default;
};

using Message = std::variant<JobRequest, JobResult>;

enum class FrameError {
    None,
    NeedMoreData,      // header or payload incomplete
    BadMagic,
    BadVersion,
    BadMessageType,
    BadPayload,        // kind/length inconsistencies inside the payload
};

inline const char* frame_error_name(FrameError e) {
    switch (e) {
    case FrameError::None: return "none";
    case FrameError::NeedMoreData: return "need-more-data";
    case FrameError::BadMagic: return "bad-magic";
    case FrameError::BadVersion: return "bad-version";
    case FrameError::BadMessageType: return "bad-message-type";
    case FrameError::BadPayload: return "bad-payload";
    }
    return "unknown";
}

namespace wire {

inline void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v >> 24));
    out.push_back(static_cast<uint8_t>(v >> 16));
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

inline void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    put_u32(out, static_cast<uint32_t>(v >> 32));
    put_u32(out, static_cast<uint32_t>(v));
}

inline void put_f64(std::vector<uint8_t>& out, double v) {
    put_u64(out, std::bit_cast<uint64_t>(v));
}

struct Reader {
    const uint8_t* data;
    size_t size;
    size_t pos = 0;

    bool remaining(size_t n) const { return size - pos >= n; }
    uint8_t u8() { return data[pos++]; }
    uint32_t u32() {
        uint32_t v = (uint32_t(data[pos]) << 24) | (uint32_t(data[pos + 1]) << 16) |
                     (uint32_t(data[pos + 2]) << 8) | uint32_t(data[pos + 3]);
        pos += 4;
        return v;
    }
    uint64_t u64() {
        uint64_t hi = u32();
        return (hi << 32) | u32();
    }
    double f64() { return std::bit_cast<double>(u64()); }
};

}  // namespace wire

inline std::vector<uint8_t> encode_payload(const JobRequest& req) {
    std::vector<uint8_t> p;
    if (req.kind == JobKind::Shutdown) return p;  // bare 8-byte frame
    wire::put_u64(p, req.job_id);
    p.push_back(static_cast<uint8_t>(req.kind));
    if (req.kind == JobKind::LoadProblem) {
        uint32_t blob_len = static_cast<uint32_t>(8 + req.problem_hamiltonian.size() +
                                                  req.problem_circuit.size());
        wire::put_u32(p, blob_len);
        wire::put_u32(p, static_cast<uint32_t>(req.problem_hamiltonian.size()));
        p.insert(p.end(), req.problem_hamiltonian.begin(), req.problem_hamiltonian.end());
        wire::put_u32(p, static_cast<uint32_t>(req.problem_circuit.size()));
        p.insert(p.end(), req.problem_circuit.begin(), req.problem_circuit.end());
    } else {
        wire::put_u32(p, static_cast<uint32_t>(req.theta.size()));
        for (double v : req.theta) wire::put_f64(p, v);
    }
    return p;
}

inline std::vector<uint8_t> encode_payload(const JobResult& res) {
    std::vector<uint8_t> p;
    wire::put_u64(p, res.job_id);
    p.push_back(static_cast<uint8_t>(res.kind));
    p.push_back(static_cast<uint8_t>(res.status));
    wire::put_f64(p, res.energy);
    return p;
}

inline std::vector<uint8_t> encode_frame(const Message& msg) {
    std::vector<uint8_t> payload = std::holds_alternative<JobRequest>(msg)
                                       ? encode_payload(std::get<JobRequest>(msg))
                                       : encode_payload(std::get<JobResult>(msg));
    std::vector<uint8_t> frame;
    frame.reserve(kFrameHeaderSize + payload.size());
    frame.push_back(kFrameMagic0);
    frame.push_back(kFrameMagic1);
    frame.push_back(kFrameVersion);
    MessageType type = MessageType::Result;
    if (std::holds_alternative<JobRequest>(msg))
        type = std::get<JobRequest>(msg).kind == JobKind::Shutdown ? MessageType::Shutdown
                                                                  : MessageType::Request;
    frame.push_back(static_cast<uint8_t>(type));
    wire::put_u32(frame, static_cast<uint32_t>(payload.size()));
    frame.insert(frame.end(), payload.begin(), payload.end());
    return frame;
}

struct DecodeOutcome {
    FrameError error = FrameError::None;
    Message message;
    size_t consumed = 0;  // bytes consumed on success
};

inline bool valid_job_kind(uint8_t k) { return k <= static_cast<uint8_t>(JobKind::Shutdown); }

inline DecodeOutcome decode_frame(const uint8_t* data, size_t size) {
    DecodeOutcome out;
    if (size < kFrameHeaderSize) {
        out.error = FrameError::NeedMoreData;
        return out;
    }
    if (data[0] != kFrameMagic0 || data[1] != kFrameMagic1) {
        out.error = FrameError::BadMagic;
        return out;
    }
    if (data[2] != kFrameVersion) {
        out.error = FrameError::BadVersion;
        return out;
    }
    uint8_t type = data[3];
    if (type != static_cast<uint8_t>(MessageType::Request) &&
        type != static_cast<uint8_t>(MessageType::Result) &&
        type != static_cast<uint8_t>(MessageType::Shutdown)) {
        out.error = FrameError::BadMessageType;
        return out;
    }
    wire::Reader header{data, size, 4};
    uint32_t payload_len = header.u32();
    if (size < kFrameHeaderSize + payload_len) {
        out.error = FrameError::NeedMoreData;
        return out;
    }
    wire::Reader r{data + kFrameHeaderSize, payload_len, 0};

    if (type == static_cast<uint8_t>(MessageType::Shutdown)) {
        if (payload_len != 0) {
            out.error = FrameError::BadPayload;
            return out;
        }
        JobRequest req;
        req.kind = JobKind::Shutdown;
        out.message = req;
        out.consumed = kFrameHeaderSize;
        return out;
    }
    if (type == static_cast<uint8_t>(MessageType::Result)) {
        if (payload_len != 8 + 1 + 1 + 8) {
            out.error = FrameError::BadPayload;
            return out;
        }
        JobResult res;
        res.job_id = r.u64();
        uint8_t kind = r.u8();
        uint8_t status = r.u8();
        if (!valid_job_kind(kind) || status > static_cast<uint8_t>(JobStatus::BadRequest)) {
            out.error = FrameError::BadPayload;
            return out;
        }
        res.kind = static_cast<JobKind>(kind);
        res.status = static_cast<JobStatus>(status);
        res.energy = r.f64();
        out.message = res;
    } else {
        if (payload_len < 8 + 1 + 4) {
            out.error = FrameError::BadPayload;
            return out;
        }
        JobRequest req;
        req.job_id = r.u64();
        uint8_t kind = r.u8();
        if (!valid_job_kind(kind) || kind == static_cast<uint8_t>(JobKind::Shutdown)) {
            out.error = FrameError::BadPayload;
            return out;
        }
        req.kind = static_cast<JobKind>(kind);
        uint32_t count = r.u32();
        if (req.kind == JobKind::LoadProblem) {
            if (!r.remaining(count) || r.pos + count != payload_len || count < 8) {
                out.error = FrameError::BadPayload;
                return out;
            }
            uint32_t hlen = r.u32();
            if (!r.remaining(uint64_t(hlen) + 4)) {
                out.error = FrameError::BadPayload;
                return out;
            }
            req.problem_hamiltonian.assign(reinterpret_cast<const char*>(r.data + r.pos), hlen);
            r.pos += hlen;
            uint32_t clen = r.u32();
            if (!r.remaining(clen) || r.pos + clen != payload_len) {
                out.error = FrameError::BadPayload;
                return out;
            }
            req.problem_circuit.assign(reinterpret_cast<const char*>(r.data + r.pos), clen);
            r.pos += clen;
        } else {
            if (payload_len != 8 + 1 + 4 + uint64_t(count) * 8) {
                out.error = FrameError::BadPayload;
                return out;
            }
            req.theta.reserve(count);
            for (uint32_t i = 0; i < count; ++i) req.theta.push_back(r.f64());
        }
        out.message = req;
    }
    out.consumed = kFrameHeaderSize + payload_len;
    return out;
}

inline DecodeOutcome decode_frame(const std::vector<uint8_t>& bytes) {
    return decode_frame(bytes.data(), bytes.size());
}

}  // namespace parvqe
