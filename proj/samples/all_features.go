package main

import "fmt"

func main() {
	channel := make(chan int)

	defer func() { fmt.Print(<-channel) }()
	go func() {
		if true {
			channel <- 20
		}
	}()
}
