#pragma once

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace parvqe {

/// RAII TCP connection with whole-buffer send/receive helpers.
class TcpStream {
  public:
    TcpStream() = default;
    explicit TcpStream(int fd) : fd_(fd) {}
    TcpStream(TcpStream&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
    TcpStream& operator=(TcpStream&& other) noexcept {
        if (this != &other) {
            close();
            fd_ = std::exchange(other.fd_, -1);
        }
        return *this;
    }
    TcpStream(const TcpStream&) = delete;
    TcpStream& operator=(const TcpStream&) = delete;
    ~TcpStream() { close(); }

    static TcpStream connect(const std::string& host, uint16_t port) {
        addrinfo hints{};
        hints.ai_family = AF_INET;
        hints.ai_socktype = SOCK_STREAM;
        addrinfo* res = nullptr;
        if (getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0)
            throw std::runtime_error("connect: cannot resolve " + host);
        int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
        if (fd < 0) {
            freeaddrinfo(res);
            throw std::runtime_error("connect: socket() failed");
        }
        int rc = ::connect(fd, res->ai_addr, res->ai_addrlen);
        freeaddrinfo(res);
        if (rc != 0) {
            ::close(fd);
            throw std::runtime_error("connect: cannot reach " + host + ":" + std::to_string(port));
        }
        int one = 1;
        setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        return TcpStream(fd);
    }

    bool valid() const { return fd_ >= 0; }

    void send_all(const uint8_t* data, size_t size) {
        size_t sent = 0;
        while (sent < size) {
            ssize_t n = ::send(fd_, data + sent, size - sent, MSG_NOSIGNAL);
            if (n <= 0) throw std::runtime_error("send_all: connection lost");
            sent += static_cast<size_t>(n);
        }
    }
    void send_all(const std::vector<uint8_t>& data) { send_all(data.data(), data.size()); }

    /// Reads exactly `size` bytes; returns false on clean EOF at a boundary.
    bool recv_all(uint8_t* data, size_t size) {
        size_t got = 0;
        while (got < size) {
            ssize_t n = ::recv(fd_, data + got, size - got, 0);
            if (n == 0) {
                if (got == 0) return false;
                throw std::runtime_error("recv_all: connection closed mid-message");
            }
            if (n < 0) throw std::runtime_error("recv_all: read error");
            got += static_cast<size_t>(n);
        }
        return true;
    }

    void close() {
        if (fd_ >= 0) {
            ::close(fd_);
            fd_ = -1;
        }
    }

  private:
    int fd_ = -1;
};

class TcpListener {
  public:
    explicit TcpListener(const std::string& host, uint16_t port) {
        fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd_ < 0) throw std::runtime_error("listen: socket() failed");
        int one = 1;
        setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(port);
        if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
            addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
        if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
            ::close(fd_);
            throw std::runtime_error("listen: cannot bind " + host + ":" + std::to_string(port));
        }
        if (::listen(fd_, 16) != 0) {
            ::close(fd_);
            throw std::runtime_error("listen: listen() failed");
        }
        socklen_t len = sizeof addr;
        getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
        port_ = ntohs(addr.sin_port);
    }
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;
    ~TcpListener() {
        if (fd_ >= 0) ::close(fd_);
    }

    /// Bound port (useful when constructed with port 0).
    uint16_t port() const { return port_; }

    TcpStream accept() {
        int fd = ::accept(fd_, nullptr, nullptr);
        if (fd < 0) throw std::runtime_error("accept: failed");
        int one = 1;
        setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        return TcpStream(fd);
    }

  private:
    int fd_ = -1;
    uint16_t port_ = 0;
};

struct Endpoint {
    std::string host;
    uint16_t port;
};

inline Endpoint parse_endpoint(const std::string& text) {
    auto colon = text.rfind(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("endpoint must be host:port, got " + text);
    int port = std::stoi(text.substr(colon + 1));
    if (port < 0 || port > 65535) throw std::invalid_argument("endpoint port out of range");
    return {text.substr(0, colon), static_cast<uint16_t>(port)};
}

}  // namespace parvqe
