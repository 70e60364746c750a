use geqie::model::ImageArray;
use geqie_cli::image_io::{self, decode, encode, Encoding};

#[test]
fn ppm_write_then_read_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let img = ImageArray::random_u8(vec![8, 8], 3, 5).unwrap();
    let path = dir.path().join("img.ppm");
    image_io::write(&path, &img, Encoding::Binary).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    let back = image_io::read(&path).unwrap();
    assert_eq!(back, img);
    assert_eq!(encode(&back, Encoding::Binary).unwrap(), bytes);
}

#[test]
fn ascii_and_binary_agree() {
    let img = ImageArray::random_u8(vec![3, 5], 1, 6).unwrap();
    let p2 = encode(&img, Encoding::Ascii).unwrap();
    let p5 = encode(&img, Encoding::Binary).unwrap();
    assert!(p2.starts_with(b"P2") && p5.starts_with(b"P5"));
    assert_eq!(decode(&p2).unwrap(), decode(&p5).unwrap());
    assert_eq!(decode(&p5).unwrap().dims(), &[3, 5]);
}

#[test]
fn truncated_file_is_a_parse_error() {
    let img = ImageArray::random_u8(vec![4, 4], 3, 7).unwrap();
    let bytes = encode(&img, Encoding::Binary).unwrap();
    assert!(matches!(
        decode(&bytes[..bytes.len() - 1]),
        Err(geqie::GeqieError::Parse(_))
    ));
    let ascii = encode(&img, Encoding::Ascii).unwrap();
    assert!(decode(&ascii[..ascii.len() - 4]).is_err());
}
