import enum


class DeviceKind(str, enum.Enum):
    NMOS = "nmos"
    PMOS = "pmos"

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        try:
            return cls(str(text).strip().lower())
        except ValueError:
            raise ValueError(f"device kind must be 'nmos' or 'pmos', got {text!r}") from None
